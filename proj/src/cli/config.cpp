#include "damd/cli/config.hpp"

#include "damd/core/csv.hpp"
#include "damd/core/errors.hpp"
#include "damd/physics/random_field.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace damd::cli {

namespace {

struct Field
{
  std::string section;
  std::string key;
  std::function<void(const std::string&)> parse;
  std::function<std::string()> format;
};

std::string trimmed(const std::string& s)
{
  return boost::algorithm::trim_copy(s);
}

double to_double(const std::string& raw)
{
  const std::string s = trimmed(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ValidationError("expected a number, got '" + raw + "'");
  return v;
}

std::uint64_t to_u64(const std::string& raw)
{
  const std::string s = trimmed(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ValidationError("expected a nonnegative integer, got '" + raw + "'");
  return v;
}

bool to_bool(const std::string& raw)
{
  const std::string s = boost::algorithm::to_lower_copy(trimmed(raw));
  if (s == "true" || s == "1" || s == "yes")
    return true;
  if (s == "false" || s == "0" || s == "no")
    return false;
  throw ValidationError("expected true or false, got '" + raw + "'");
}

std::vector<std::string> to_words(const std::string& raw)
{
  std::vector<std::string> parts;
  const std::string s = trimmed(raw);
  if (s.empty())
    return parts;
  boost::algorithm::split(parts, s, boost::algorithm::is_any_of(","));
  for (auto& p : parts)
    p = trimmed(p);
  return parts;
}

std::vector<double> to_doubles(const std::string& raw)
{
  std::vector<double> out;
  for (const auto& w : to_words(raw))
    out.push_back(to_double(w));
  return out;
}

std::string fmt(double v) { return core::format_double(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

std::string fmt_list(const std::vector<double>& v)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

std::string fmt_list(const std::vector<std::string>& v)
{
  return boost::algorithm::join(v, ", ");
}

Field num(std::string sec, std::string key, double& ref)
{
  return {sec, key, [&ref](const std::string& s) { ref = to_double(s); }, [&ref] { return fmt(ref); }};
}

Field count(std::string sec, std::string key, std::size_t& ref)
{
  return {sec, key, [&ref](const std::string& s) { ref = static_cast<std::size_t>(to_u64(s)); },
          [&ref] { return fmt(static_cast<std::uint64_t>(ref)); }};
}

Field seed(std::string sec, std::string key, std::uint64_t& ref)
{
  return {sec, key, [&ref](const std::string& s) { ref = to_u64(s); }, [&ref] { return fmt(ref); }};
}

Field flag(std::string sec, std::string key, bool& ref)
{
  return {sec, key, [&ref](const std::string& s) { ref = to_bool(s); }, [&ref] { return fmt(ref); }};
}

Field opt_num(std::string sec, std::string key, std::optional<double>& ref)
{
  return {sec, key,
          [&ref](const std::string& s) {
            if (trimmed(s).empty())
              ref.reset();
            else
              ref = to_double(s);
          },
          [&ref] { return fmt_opt(ref); }};
}

Field num_list(std::string sec, std::string key, std::vector<double>& ref)
{
  return {sec, key, [&ref](const std::string& s) { ref = to_doubles(s); }, [&ref] { return fmt_list(ref); }};
}

template <class E>
Field choice(std::string sec, std::string key, E& ref, E (*from)(const std::string&),
             std::string (*to)(E))
{
  return {sec, key, [&ref, from](const std::string& s) { ref = from(trimmed(s)); },
          [&ref, to] { return to(ref); }};
}

std::vector<Field> fields(ExperimentConfig& c)
{
  return {
      num("domain", "L", c.domain.L),
      num("domain", "u_min", c.domain.u_min),
      num("domain", "u_max", c.domain.u_max),
      count("domain", "n_x", c.domain.n_x),
      count("domain", "n_u", c.domain.n_u),
      num("domain", "dt", c.domain.dt),
      num("domain", "t_end", c.domain.t_end),

      num("physics", "v", c.physics.v),
      num("physics", "u0", c.physics.u0),
      num("physics", "ub", c.physics.ub),
      num("physics", "a", c.physics.a),
      num("physics", "nu", c.physics.nu),
      num("physics", "phase", c.physics.phase),

      choice("truth", "kind", c.truth.kind, physics::field_kind_from_string, physics::to_string),
      num("truth", "k_mean", c.truth.k_mean),
      num("truth", "k_std", c.truth.k_std),
      num("truth", "k_corr_len", c.truth.k_corr_len),
      seed("truth", "seed", c.truth.seed),

      num("noise", "sigma_eps", c.noise.sigma_eps),
      seed("noise", "seed", c.noise.seed),

      {"measurements", "schedule",
       [&c](const std::string& s) { c.measurements.schedule = trimmed(s); },
       [&c] { return c.measurements.schedule; }},
      num_list("measurements", "xs", c.measurements.xs),
      num_list("measurements", "ts", c.measurements.ts),

      num("prior", "k_mean", c.prior.k_mean),
      num("prior", "k_std", c.prior.k_std),
      opt_num("prior", "k_corr_len", c.prior.k_corr_len),
      opt_num("prior", "mu0", c.prior.mu0),
      opt_num("prior", "sigma0", c.prior.sigma0),
      opt_num("prior", "mub", c.prior.mub),
      opt_num("prior", "sigmab", c.prior.sigmab),

      num("optimizer", "tol", c.optimizer.tol),
      count("optimizer", "max_iters", c.optimizer.max_iters),
      num("optimizer", "initial_simplex_scale", c.optimizer.initial_simplex_scale),

      count("enkf", "n_ens", c.enkf.n_ens),
      seed("enkf", "seed", c.enkf.seed),

      choice("closure", "family", c.closure.family, mdist::closure_family_from_string, mdist::to_string),
      choice("closure", "sign_convention", c.closure.sign_convention,
             mdist::sign_convention_from_string, mdist::to_string),
      choice("closure", "route", c.closure.route, mdist::solver_route_from_string, mdist::to_string),
      choice("closure", "quadrature_kernel", c.closure.quadrature_kernel,
             mdist::quadrature_kernel_from_string, mdist::to_string),
      count("closure", "quadrature_intervals", c.closure.quadrature_intervals),
      flag("closure", "deterministic_inputs", c.closure.deterministic_inputs),

      count("output", "snapshot_every", c.output.snapshot_every),
      num("output", "kl_time", c.output.kl_time),

      num("bayes", "k_min", c.bayes.k_min),
      num("bayes", "k_max", c.bayes.k_max),
      count("bayes", "n_k", c.bayes.n_k),

      num("fim", "x", c.fim.x),
      num("fim", "t", c.fim.t),
      {"fim", "coords", [&c](const std::string& s) { c.fim.coords = to_words(s); },
       [&c] { return fmt_list(c.fim.coords); }},
      num("fim", "h_rel", c.fim.h_rel),
      flag("fim", "gaussian_self_test", c.fim.gaussian_self_test),
      num("fim", "gaussian_mean", c.fim.gaussian_mean),
      num("fim", "gaussian_sigma", c.fim.gaussian_sigma),

      count("verify_mc", "n_mc", c.verify_mc.n_mc),
      seed("verify_mc", "seed", c.verify_mc.seed),
      num_list("verify_mc", "probe_xs", c.verify_mc.probe_xs),
      num("verify_mc", "probe_t", c.verify_mc.probe_t),
  };
}

void check(bool ok, const std::string& where, const std::string& what)
{
  if (!ok)
    throw ValidationError(where + ": " + what);
}

} // namespace

ExperimentConfig parse_config(const std::string& text)
{
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("config: " + std::string(e.what()));
  }
  ExperimentConfig cfg;
  auto table = fields(cfg);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ValidationError("config: key '" + section + "' outside a section");
    bool known_section = false;
    for (const auto& f : table)
      known_section = known_section || f.section == section;
    if (!known_section)
      throw ValidationError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      auto it = std::find_if(table.begin(), table.end(),
                             [&](const Field& f) { return f.section == section && f.key == key; });
      if (it == table.end())
        throw ValidationError("config: unknown key [" + section + "] " + key);
      try {
        it->parse(value.data());
      } catch (const std::exception& e) {
        throw ValidationError("config: [" + section + "] " + key + ": " + e.what());
      }
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot read config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string to_ini(const ExperimentConfig& cfg)
{
  ExperimentConfig copy = cfg;
  std::ostringstream os;
  std::string current;
  for (const auto& f : fields(copy)) {
    if (f.section != current) {
      os << (current.empty() ? "" : "\n") << '[' << f.section << "]\n";
      current = f.section;
    }
    os << f.key << " = " << f.format() << '\n';
  }
  return os.str();
}

void write_resolved_config(const std::filesystem::path& path, const ExperimentConfig& cfg)
{
  std::ofstream out(path);
  if (!out)
    throw ValidationError("cannot open " + path.string() + " for writing");
  out << to_ini(cfg);
}

void ExperimentConfig::validate() const
{
  try {
    grid();
  } catch (const ContractError& e) {
    throw ValidationError(std::string("[domain] ") + e.what());
  }
  check(domain.L > 0.0, "[domain] L", "must be > 0");
  try {
    physics.validate(domain.u_min, domain.u_max);
  } catch (const ContractError& e) {
    throw ValidationError(std::string("[physics] ") + e.what());
  }
  check(truth.k_std >= 0.0, "[truth] k_std", "must be >= 0");
  check(truth.kind != physics::FieldKind::exponential || truth.k_corr_len > 0.0,
        "[truth] k_corr_len", "must be > 0 for an exponential field");
  check(noise.sigma_eps >= 0.0, "[noise] sigma_eps", "must be >= 0");
  check(measurements.schedule == "two_sensor" || measurements.schedule == "grid",
        "[measurements] schedule", "must be two_sensor or grid");
  if (measurements.schedule == "grid")
    check(!measurements.xs.empty() && !measurements.ts.empty(), "[measurements] xs, ts",
          "grid schedule needs both lists");
  try {
    prior.validate();
  } catch (const ContractError& e) {
    throw ValidationError(std::string("[prior] ") + e.what());
  }
  try {
    optimizer.validate();
  } catch (const ContractError& e) {
    throw ValidationError(std::string("[optimizer] ") + e.what());
  }
  check(enkf.n_ens >= 2, "[enkf] n_ens", "must be >= 2");
  check(closure.quadrature_intervals >= 1, "[closure] quadrature_intervals", "must be >= 1");
  check(closure.family != mdist::ClosureFamily::general_quadrature ||
            closure.quadrature_kernel != mdist::QuadratureKernel::custom,
        "[closure] quadrature_kernel", "custom kernels are only available through the library");
  check(bayes.k_min < bayes.k_max && bayes.n_k >= 2, "[bayes]", "need k_min < k_max and n_k >= 2");
  check(fim.h_rel > 0.0, "[fim] h_rel", "must be > 0");
  check(fim.gaussian_sigma > 0.0, "[fim] gaussian_sigma", "must be > 0");
  check(!fim.coords.empty(), "[fim] coords", "must not be empty");
  check(verify_mc.n_mc >= 1, "[verify_mc] n_mc", "must be >= 1");
  check(!verify_mc.probe_xs.empty(), "[verify_mc] probe_xs", "must not be empty");
}

void ExperimentConfig::override_seeds(std::uint64_t base)
{
  truth.seed = base;
  noise.seed = base + 1;
  enkf.seed = base + 2;
  verify_mc.seed = base + 3;
}

core::Grid2D ExperimentConfig::grid() const
{
  return core::Grid2D(0.0, domain.L, domain.n_x, domain.u_min, domain.u_max, domain.n_u, domain.dt,
                      domain.t_end);
}

mdist::ClosureSpec ExperimentConfig::closure_spec() const
{
  mdist::ClosureSpec spec;
  spec.family = closure.family;
  spec.sign_convention = closure.sign_convention;
  spec.kernel = closure.quadrature_kernel;
  spec.quadrature_intervals = closure.quadrature_intervals;
  spec.v = physics.v;
  return spec;
}

std::vector<physics::Location> ExperimentConfig::locations() const
{
  if (measurements.schedule == "two_sensor")
    return physics::two_sensor_schedule();
  return physics::schedule_grid(measurements.xs, measurements.ts);
}

physics::PhysicsConfig ExperimentConfig::truth_physics() const
{
  physics::PhysicsConfig p = physics;
  p.k_field = physics::sample_k_field(truth.kind, truth.k_mean, truth.k_std, truth.k_corr_len, grid(),
                                      truth.seed);
  return p;
}

mdist::ForecastModel ExperimentConfig::forecast_model(const physics::PhysicsConfig& phys) const
{
  return {closure_spec(), phys, closure.deterministic_inputs, grid(), closure.route};
}

double ExperimentConfig::kl_time() const
{
  return output.kl_time < 0.0 ? domain.t_end : output.kl_time;
}

} // namespace damd::cli
