#include "damd/cli/commands.hpp"

#include "damd/assimilate/bayes.hpp"
#include "damd/assimilate/damd.hpp"
#include "damd/assimilate/enkf.hpp"
#include "damd/core/csv.hpp"
#include "damd/core/density.hpp"
#include "damd/core/errors.hpp"
#include "damd/geometry/information.hpp"
#include "damd/physics/random_field.hpp"
#include "damd/physics/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace damd::cli {

namespace fs = std::filesystem;

std::string to_string(AssimilateMode m)
{
  switch (m) {
  case AssimilateMode::inputs: return "inputs";
  case AssimilateMode::k_const: return "k_const";
  case AssimilateMode::k_white: return "k_white";
  case AssimilateMode::k_exp: return "k_exp";
  }
  return "";
}

AssimilateMode assimilate_mode_from_string(const std::string& s)
{
  for (auto m : {AssimilateMode::inputs, AssimilateMode::k_const, AssimilateMode::k_white,
                 AssimilateMode::k_exp})
    if (to_string(m) == s)
      return m;
  throw ValidationError("unknown assimilation mode '" + s + "' (inputs | k_const | k_white | k_exp)");
}

void CommandResult::add(const std::string& key, double value)
{
  summary.emplace_back(key, core::format_double(value));
}

void CommandResult::add(const std::string& key, const std::string& value)
{
  summary.emplace_back(key, value);
}

const std::string& CommandResult::get(const std::string& key) const
{
  for (const auto& [k, v] : summary)
    if (k == key)
      return v;
  throw ContractError("no summary entry '" + key + "'");
}

namespace {

void prepare(const ExperimentConfig& cfg, const fs::path& out_dir)
{
  fs::create_directories(out_dir);
  write_resolved_config(out_dir / "resolved_config.ini", cfg);
}

void finish(CommandResult& r, const fs::path& out_dir)
{
  core::CsvWriter w(out_dir / "summary.csv", {"key", "value"});
  for (const auto& [k, v] : r.summary) {
    w.cell(k).cell(v);
    w.end_row();
  }
}

void require(bool ok, const std::string& what)
{
  if (!ok)
    throw ValidationError(what);
}

bool family_matches(const ExperimentConfig& cfg, mdist::ClosureFamily closed,
                    mdist::QuadratureKernel kernel)
{
  return cfg.closure.family == closed ||
         (cfg.closure.family == mdist::ClosureFamily::general_quadrature &&
          cfg.closure.quadrature_kernel == kernel);
}

void add_phi(CommandResult& r, const std::string& prefix, const mdist::StatParams& phi)
{
  for (auto c : {assimilate::Coord::k_mean, assimilate::Coord::k_std, assimilate::Coord::k_corr_len,
                 assimilate::Coord::mu0, assimilate::Coord::sigma0, assimilate::Coord::mub,
                 assimilate::Coord::sigmab}) {
    try {
      r.add(prefix + to_string(c), assimilate::get_coord(phi, c));
    } catch (const ContractError&) {
    }
  }
}

/// Ensemble states at every x node, time t (row per member).
std::vector<std::vector<double>> member_states(const assimilate::Ensemble& ens,
                                               const physics::PhysicsConfig& base,
                                               const core::Grid2D& grid, double t)
{
  std::vector<std::vector<double>> out;
  physics::PhysicsConfig p = base;
  for (std::size_t i = 0; i < ens.n_ens(); ++i) {
    p.k_field = ens.member(i);
    out.push_back(physics::solve_state_fv(p, grid, t));
  }
  return out;
}

/// KL(posterior || prior) of kernel density estimates of the member states.
/// Nodes where either ensemble has no spread are reported as NaN.
std::vector<geometry::KlPoint> enkf_kl_profile(const assimilate::EnkfResult& res,
                                               const physics::PhysicsConfig& base,
                                               const core::Grid2D& grid, double t)
{
  const auto prior = member_states(res.prior, base, grid, t);
  const auto post = member_states(res.posterior, base, grid, t);
  const auto u = grid.u_nodes();
  std::vector<geometry::KlPoint> out;
  std::vector<double> a(prior.size()), b(post.size());
  for (std::size_t i = 0; i <= grid.n_x(); ++i) {
    for (std::size_t m = 0; m < prior.size(); ++m)
      a[m] = prior[m][i];
    for (std::size_t m = 0; m < post.size(); ++m)
      b[m] = post[m][i];
    double dkl = std::numeric_limits<double>::quiet_NaN();
    try {
      dkl = core::kl_divergence(core::kde_gaussian(b, u), core::kde_gaussian(a, u));
    } catch (const DegenerateInput&) {
    }
    out.push_back({grid.x_node(i), dkl});
  }
  return out;
}

} // namespace

CommandResult cmd_forward(const ExperimentConfig& cfg, const fs::path& out_dir)
{
  prepare(cfg, out_dir);
  CommandResult r;
  const auto model = cfg.forecast_model(cfg.physics);
  const auto sol = model.profile(cfg.prior, cfg.domain.t_end, cfg.output.snapshot_every);
  mdist::write_cdf_profile(out_dir / "cdf_profile.csv", sol);

  core::CsvWriter w(out_dir / "forward_summary.csv", {"x", "t", "median", "q25", "q75", "iqr"});
  const std::size_t last = sol.snapshots.size() - 1;
  for (std::size_t i = 0; i <= sol.n_x_solved; ++i) {
    const auto c = sol.slice_at_node(last, i);
    const double q25 = c.quantile(0.25), q50 = c.quantile(0.5), q75 = c.quantile(0.75);
    w.cell(sol.grid.x_node(i)).cell(sol.snapshots[last].t).cell(q50).cell(q25).cell(q75).cell(q75 - q25);
    w.end_row();
  }
  r.add("route", model.uses_characteristics() ? "characteristics" : "fv");
  r.add("snapshots", static_cast<double>(sol.snapshots.size()));
  r.add("min_forward_difference", sol.min_forward_difference);
  r.warnings = sol.warnings;
  finish(r, out_dir);
  return r;
}

CommandResult cmd_assimilate(const ExperimentConfig& cfg, AssimilateMode mode,
                             const fs::path& out_dir)
{
  using assimilate::Coord;
  require(cfg.noise.sigma_eps > 0.0, "[noise] sigma_eps: assimilation needs sigma_eps > 0");
  switch (mode) {
  case AssimilateMode::inputs:
    require(cfg.closure.family == mdist::ClosureFamily::exact_deterministic_k,
            "[closure] family: mode inputs needs exact_deterministic_k");
    require(!cfg.closure.deterministic_inputs,
            "[closure] deterministic_inputs: mode inputs needs random inputs (false)");
    require(cfg.prior.mu0 && cfg.prior.sigma0 && cfg.prior.mub && cfg.prior.sigmab,
            "[prior] mode inputs needs mu0, sigma0, mub, sigmab");
    require(cfg.truth.kind == physics::FieldKind::constant && cfg.truth.k_std == 0.0,
            "[truth] mode inputs needs a deterministic constant k (kind = constant, k_std = 0)");
    break;
  case AssimilateMode::k_const:
    require(family_matches(cfg, mdist::ClosureFamily::random_constant_k, mdist::QuadratureKernel::constant),
            "[closure] family: mode k_const needs random_constant_k");
    require(cfg.prior.k_std > 0.0, "[prior] k_std: mode k_const needs k_std > 0");
    break;
  case AssimilateMode::k_white:
    require(family_matches(cfg, mdist::ClosureFamily::white_noise_k, mdist::QuadratureKernel::white),
            "[closure] family: mode k_white needs white_noise_k");
    break;
  case AssimilateMode::k_exp:
    require(family_matches(cfg, mdist::ClosureFamily::exponential_k, mdist::QuadratureKernel::exponential),
            "[closure] family: mode k_exp needs exponential_k");
    require(cfg.prior.k_corr_len.has_value(), "[prior] k_corr_len: mode k_exp needs a correlation length");
    break;
  }
  prepare(cfg, out_dir);
  CommandResult r;

  const auto grid = cfg.grid();
  const auto truth = cfg.truth_physics();
  const auto ms = physics::generate_observations(truth, cfg.locations(), cfg.noise.sigma_eps, cfg.noise.seed);
  physics::write_measurements(out_dir / "measurements.csv", ms);
  physics::write_k_field(out_dir / "k_field.csv", truth.k_field);
  r.add("mode", to_string(mode));
  r.add("n_meas", static_cast<double>(ms.size()));
  r.add("truth_k_spatial_mean", truth.k_field.spatial_mean());
  r.add("truth_k_spatial_std", truth.k_field.spatial_std());

  const auto model = cfg.forecast_model(truth);
  assimilate::CoordSelector coords;
  if (mode == AssimilateMode::inputs)
    coords = assimilate::region_coords(cfg.physics.v);
  else if (mode == AssimilateMode::k_exp)
    coords = assimilate::fixed_coords({Coord::k_mean, Coord::k_std, Coord::k_corr_len});
  else
    coords = assimilate::fixed_coords({Coord::k_mean, Coord::k_std});

  const auto trace = assimilate::damd_assimilate(ms, cfg.prior, model, coords, cfg.optimizer);
  assimilate::write_posterior_params(out_dir / "posterior_params.csv", trace, cfg.prior);
  if (!trace.ok())
    throw NumericalError("assimilation step " + std::to_string(trace.failed_step) + ": " + trace.error);
  add_phi(r, "damd_", trace.final_phi);
  std::size_t unconverged = 0;
  for (const auto& s : trace.steps)
    unconverged += s.converged ? 0 : 1;
  r.add("damd_unconverged_steps", static_cast<double>(unconverged));
  if (unconverged > 0)
    r.warnings.push_back(std::to_string(unconverged) + " optimizer steps hit max_iters");

  const double t_kl = cfg.kl_time();
  const auto kl = geometry::kl_gain_profile(model, cfg.prior, trace.final_phi, t_kl);
  geometry::write_kl_profile(out_dir / "kl_profile.csv", kl);

  switch (mode) {
  case AssimilateMode::inputs: {
    const auto post = assimilate::exact_bayes_inputs(ms, {*cfg.prior.mu0, *cfg.prior.sigma0},
                                                     {*cfg.prior.mub, *cfg.prior.sigmab},
                                                     cfg.truth.k_mean, truth);
    core::CsvWriter w(out_dir / "bayes_inputs.csv", {"coordinate", "prior", "bayes", "damd"});
    const double rows[4][3] = {{*cfg.prior.mu0, post.initial.mean, *trace.final_phi.mu0},
                               {*cfg.prior.sigma0, post.initial.std, *trace.final_phi.sigma0},
                               {*cfg.prior.mub, post.boundary.mean, *trace.final_phi.mub},
                               {*cfg.prior.sigmab, post.boundary.std, *trace.final_phi.sigmab}};
    const char* names[4] = {"mu0", "sigma0", "mub", "sigmab"};
    for (int i = 0; i < 4; ++i) {
      w.cell(names[i]).cell(rows[i][0]).cell(rows[i][1]).cell(rows[i][2]);
      w.end_row();
    }
    mdist::StatParams bayes_phi = cfg.prior;
    bayes_phi.mu0 = post.initial.mean;
    bayes_phi.sigma0 = post.initial.std;
    bayes_phi.mub = post.boundary.mean;
    bayes_phi.sigmab = post.boundary.std;
    geometry::write_kl_profile(out_dir / "kl_profile_bayes.csv",
                               geometry::kl_gain_profile(model, cfg.prior, bayes_phi, t_kl));
    add_phi(r, "bayes_", bayes_phi);
    break;
  }
  case AssimilateMode::k_const: {
    const auto post = assimilate::grid_bayes_k(ms, {cfg.prior.k_mean, cfg.prior.k_std}, truth,
                                               core::linspace(cfg.bayes.k_min, cfg.bayes.k_max, cfg.bayes.n_k));
    assimilate::write_bayes_posterior(out_dir / "bayes_posterior.csv", post);
    r.add("bayes_mode", post.mode());
    r.add("bayes_mean", post.mean());
    r.add("bayes_std", post.stddev());
    break;
  }
  case AssimilateMode::k_white:
  case AssimilateMode::k_exp: {
    assimilate::EnkfPrior prior{cfg.prior.k_mean, cfg.prior.k_std,
                                mode == AssimilateMode::k_exp ? cfg.prior.k_corr_len : std::nullopt};
    const auto res = assimilate::enkf_assimilate(ms, prior, grid, truth, cfg.enkf.n_ens, cfg.enkf.seed);
    assimilate::write_ensemble(out_dir / "ensemble_posterior.csv", res.posterior);
    {
      core::CsvWriter w(out_dir / "enkf_steps.csv", {"t", "n_obs", "averaged_mean", "averaged_std"});
      for (const auto& s : res.steps) {
        w.cell(s.t).cell(s.n_obs).cell(s.averaged_mean).cell(s.averaged_std);
        w.end_row();
      }
    }
    std::vector<physics::KField> fields;
    for (std::size_t i = 0; i < res.posterior.n_ens(); ++i)
      fields.push_back(res.posterior.member(i));
    {
      core::CsvWriter w(out_dir / "variogram.csv", {"lag", "gamma", "pairs"});
      for (const auto& b : physics::empirical_semivariogram(fields)) {
        w.cell(b.lag).cell(b.gamma).cell(b.pairs);
        w.end_row();
      }
    }
    geometry::write_kl_profile(out_dir / "kl_profile_enkf.csv", enkf_kl_profile(res, truth, grid, t_kl));
    r.add("enkf_averaged_mean", res.posterior.averaged_mean());
    r.add("enkf_averaged_std", res.posterior.averaged_std());
    r.warnings.insert(r.warnings.end(), res.warnings.begin(), res.warnings.end());
    break;
  }
  }
  finish(r, out_dir);
  return r;
}

CommandResult cmd_verify_mc(const ExperimentConfig& cfg, const fs::path& out_dir)
{
  require(family_matches(cfg, mdist::ClosureFamily::random_constant_k, mdist::QuadratureKernel::constant),
          "[closure] family: verify-mc needs random_constant_k");
  require(cfg.closure.deterministic_inputs, "[closure] deterministic_inputs: verify-mc needs true");
  prepare(cfg, out_dir);
  CommandResult r;
  const auto grid = cfg.grid();
  const auto u = grid.u_nodes();
  const double t = cfg.verify_mc.probe_t;
  const double mean = cfg.prior.k_mean, sd = cfg.prior.k_std;
  const double x_far = *std::max_element(cfg.verify_mc.probe_xs.begin(), cfg.verify_mc.probe_xs.end());

  const auto model = cfg.forecast_model(cfg.physics);
  const auto sol = model.solve(cfg.prior, t, x_far);
  r.warnings = sol.warnings;

  const physics::MarginalFamily families[3] = {physics::MarginalFamily::normal,
                                               physics::MarginalFamily::lognormal,
                                               physics::MarginalFamily::uniform};
  std::vector<std::vector<double>> draws;
  core::CsvWriter mom(out_dir / "mc_moments.csv", {"family", "mean", "std", "mean_z", "std_z"});
  for (auto fam : families) {
    draws.push_back(physics::sample_constant_k(fam, mean, sd, cfg.verify_mc.n_mc, cfg.verify_mc.seed));
    const double m = core::sample_mean(draws.back());
    const double s = draws.back().size() > 1 ? core::sample_std(draws.back()) : 0.0;
    const double n = static_cast<double>(draws.back().size());
    // standard errors of the sample mean and (approximately) the sample std
    const double mean_z = sd > 0.0 ? (m - mean) / (sd / std::sqrt(n)) : 0.0;
    const double std_z = sd > 0.0 ? (s - sd) / (sd / std::sqrt(2.0 * (n - 1.0))) : 0.0;
    mom.cell(physics::to_string(fam)).cell(m).cell(s).cell(mean_z).cell(std_z);
    mom.end_row();
    r.add("mean_z_" + physics::to_string(fam), mean_z);
    r.add("std_z_" + physics::to_string(fam), std_z);
  }

  core::CsvWriter cmp(out_dir / "mc_compare.csv", {"family", "x", "U", "F_mc", "F_fv"});
  core::CsvWriter sum(out_dir / "mc_summary.csv", {"x", "a", "b", "sup_norm"});
  double worst_fv = 0.0, worst_pair = 0.0;
  for (double x : cfg.verify_mc.probe_xs) {
    const auto fv = sol.slice(sol.snapshots.size() - 1, x);
    const double xn = grid.x_node(grid.nearest_x(x));
    std::vector<core::DiscreteCdf> mc;
    for (std::size_t f = 0; f < 3; ++f) {
      std::vector<double> states;
      physics::PhysicsConfig p = cfg.physics;
      for (double k : draws[f]) {
        p.k_field = physics::KField::uniform(k, 0.0, 1.0, 1);
        states.push_back(physics::analytic_state(xn, t, p));
      }
      mc.push_back(core::empirical_cdf(states, u));
      for (std::size_t j = 0; j < u.size(); ++j) {
        cmp.cell(physics::to_string(families[f])).cell(xn).cell(u[j]).cell(mc.back().values()[j]).cell(fv.values()[j]);
        cmp.end_row();
      }
      const double d = core::sup_distance(mc.back(), fv);
      worst_fv = std::max(worst_fv, d);
      sum.cell(xn).cell(physics::to_string(families[f])).cell("fv").cell(d);
      sum.end_row();
    }
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b) {
        const double d = core::sup_distance(mc[a], mc[b]);
        worst_pair = std::max(worst_pair, d);
        sum.cell(xn).cell(physics::to_string(families[a])).cell(physics::to_string(families[b])).cell(d);
        sum.end_row();
      }
  }
  r.add("max_sup_mc_vs_fv", worst_fv);
  r.add("max_sup_between_families", worst_pair);
  finish(r, out_dir);
  return r;
}

CommandResult cmd_fim(const ExperimentConfig& cfg, const fs::path& out_dir)
{
  prepare(cfg, out_dir);
  CommandResult r;
  geometry::FimMatrix fim, half;
  if (cfg.fim.gaussian_self_test) {
    const double mu = cfg.fim.gaussian_mean, sigma = cfg.fim.gaussian_sigma;
    const auto nodes = core::linspace(mu - 12.0 * sigma, mu + 12.0 * sigma, 4801);
    auto family = [&nodes](const std::vector<double>& p) {
      std::vector<double> f(nodes.size());
      const core::GaussianDist g(p[0], p[1]);
      for (std::size_t j = 0; j < nodes.size(); ++j)
        f[j] = g.pdf(nodes[j]);
      const double mass = core::trapezoid(nodes, f);
      for (double& v : f)
        v /= mass;
      return core::DiscretePdf(nodes, std::move(f));
    };
    fim = geometry::fisher_information(family, {"mu", "sigma"}, {mu, sigma}, cfg.fim.h_rel);
    half = geometry::fisher_information(family, {"mu", "sigma"}, {mu, sigma}, 0.5 * cfg.fim.h_rel);
    const double ref[2] = {1.0 / (sigma * sigma), 2.0 / (sigma * sigma)};
    double worst = std::abs(fim.g(0, 1)) * sigma * sigma;
    for (int i = 0; i < 2; ++i)
      worst = std::max(worst, std::abs(fim.g(i, i) - ref[i]) / ref[i]);
    r.add("gaussian_max_rel_error", worst);
  } else {
    const auto model = cfg.forecast_model(cfg.physics);
    fim = geometry::fisher_information(model, cfg.prior, cfg.fim.x, cfg.fim.t, cfg.fim.coords, cfg.fim.h_rel);
    half = geometry::fisher_information(model, cfg.prior, cfg.fim.x, cfg.fim.t, cfg.fim.coords,
                                        0.5 * cfg.fim.h_rel);
  }
  geometry::write_fim(out_dir / "fim.csv", fim);
  core::CsvWriter w(out_dir / "fim_halving.csv", {"coord_i", "coord_j", "g_h", "g_half", "rel_diff"});
  for (Eigen::Index a = 0; a < fim.g.rows(); ++a)
    for (Eigen::Index b = 0; b < fim.g.cols(); ++b) {
      const double gh = fim.g(a, b), g2 = half.g(a, b);
      const double rel = g2 != 0.0 ? std::abs(gh - g2) / std::abs(g2) : std::abs(gh - g2);
      w.cell(fim.coords[static_cast<std::size_t>(a)]).cell(fim.coords[static_cast<std::size_t>(b)])
          .cell(gh).cell(g2).cell(rel);
      w.end_row();
    }
  r.add("symmetric", fim.is_symmetric() ? "true" : "false");
  r.add("min_eigenvalue", fim.min_eigenvalue());
  r.add("halving_rel_diff", (fim.g - half.g).norm() / std::max(half.g.norm(), 1e-300));
  finish(r, out_dir);
  return r;
}

} // namespace damd::cli
