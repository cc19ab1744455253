#include "damd/assimilate/bayes.hpp"

#include "damd/core/csv.hpp"
#include "damd/core/density.hpp"
#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace damd::assimilate {

ObservationalPosterior observational_posterior(const core::DiscreteCdf& prior, double d,
                                               double sigma_eps)
{
  if (!(sigma_eps > 0.0))
    throw ContractError("observational_posterior: sigma_eps must be > 0");
  const core::DiscretePdf prior_pdf = core::pdf_from_cdf(prior);
  const auto& u = prior_pdf.u_nodes();
  std::vector<double> dens(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double z = (d - u[j]) / sigma_eps;
    dens[j] = prior_pdf.values()[j] * core::normal_pdf(z) / sigma_eps;
  }
  const double mass = core::trapezoid(u, dens);
  if (!(mass >= 1e-300))
    throw DegenerateInput("observational_posterior: measurement inconsistent with the prior");
  for (double& f : dens)
    f /= mass;
  core::DiscretePdf pdf(u, std::move(dens));
  core::DiscreteCdf cdf = core::cdf_from_pdf(pdf);
  return {std::move(pdf), std::move(cdf)};
}

namespace {

struct Precision
{
  double precision;
  double weighted;   // precision-weighted mean accumulator

  explicit Precision(const core::GaussianDist& g)
      : precision(1.0 / (g.std * g.std)), weighted(g.mean / (g.std * g.std))
  {}
  /// Adds d = a * X + b + noise.
  void add(double a, double b, double d, double sigma)
  {
    const double w = 1.0 / (sigma * sigma);
    precision += a * a * w;
    weighted += a * (d - b) * w;
  }
  core::GaussianDist result() const
  {
    return core::GaussianDist(weighted / precision, 1.0 / std::sqrt(precision));
  }
};

} // namespace

InputsPosterior exact_bayes_inputs(const physics::MeasurementSet& measurements,
                                   const core::GaussianDist& prior0,
                                   const core::GaussianDist& priorb, double k,
                                   const physics::PhysicsConfig& cfg)
{
  Precision p0(prior0), pb(priorb);
  for (const auto& m : measurements.records()) {
    if (!(m.sigma_eps > 0.0))
      throw ContractError("exact_bayes_inputs: sigma_eps must be > 0");
    if (m.x > cfg.v * m.t) {
      p0.add(std::exp(-k * m.t), 0.0, m.d, m.sigma_eps);
    } else {
      const double a = std::exp(-k * m.x / cfg.v);
      pb.add(a, a * physics::forcing_offset(m.t - m.x / cfg.v, cfg), m.d, m.sigma_eps);
    }
  }
  return {p0.result(), pb.result()};
}

core::DiscretePdf grid_bayes_k(const physics::MeasurementSet& measurements,
                               const core::GaussianDist& prior,
                               const physics::PhysicsConfig& cfg,
                               const std::vector<double>& k_nodes)
{
  if (k_nodes.size() < 2)
    throw ContractError("grid_bayes_k: need at least two k nodes");
  std::vector<double> logp(k_nodes.size());
  physics::PhysicsConfig local = cfg;
  for (std::size_t n = 0; n < k_nodes.size(); ++n) {
    local.k_field = physics::KField::uniform(k_nodes[n], 0.0, 1.0, 1);
    double acc = prior.log_pdf(k_nodes[n]);
    for (const auto& m : measurements.records()) {
      if (!(m.sigma_eps > 0.0))
        throw ContractError("grid_bayes_k: sigma_eps must be > 0");
      const double z = (m.d - physics::analytic_state(m.x, m.t, local)) / m.sigma_eps;
      acc += -0.5 * z * z - std::log(m.sigma_eps);
    }
    logp[n] = acc;
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  if (!std::isfinite(top))
    throw DegenerateInput("grid_bayes_k: posterior has no finite mass on the k nodes");
  std::vector<double> dens(k_nodes.size());
  for (std::size_t n = 0; n < k_nodes.size(); ++n)
    dens[n] = std::exp(logp[n] - top);
  const double mass = core::trapezoid(k_nodes, dens);
  if (!(mass > 1e-300))
    throw DegenerateInput("grid_bayes_k: data inconsistent with the prior on the k nodes");
  for (double& f : dens)
    f /= mass;
  return core::DiscretePdf(k_nodes, std::move(dens));
}

void write_bayes_posterior(const std::filesystem::path& path, const core::DiscretePdf& pdf)
{
  core::CsvWriter w(path, {"K", "density"});
  for (std::size_t n = 0; n < pdf.size(); ++n) {
    w.cell(pdf.u_nodes()[n]).cell(pdf.values()[n]);
    w.end_row();
  }
}

} // namespace damd::assimilate
