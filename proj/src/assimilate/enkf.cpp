#include "damd/assimilate/enkf.hpp"

#include "damd/core/csv.hpp"
#include "damd/core/errors.hpp"
#include "damd/physics/random_field.hpp"

#include <cmath>

namespace damd::assimilate {

void enkf_update(Eigen::MatrixXd& params, const Eigen::MatrixXd& predictions,
                 const Eigen::VectorXd& d, double sigma_eps, core::Rng& rng,
                 std::vector<std::string>& warnings)
{
  const Eigen::Index n = params.rows();
  const Eigen::Index n_obs = predictions.cols();
  if (n < 2)
    throw ContractError("enkf_update: need at least two members");
  if (predictions.rows() != n || d.size() != n_obs)
    throw ContractError("enkf_update: inconsistent ensemble and observation sizes");
  if (!(sigma_eps >= 0.0))
    throw ContractError("enkf_update: sigma_eps must be >= 0");

  const Eigen::MatrixXd pa = params.rowwise() - params.colwise().mean();
  const Eigen::MatrixXd da = predictions.rowwise() - predictions.colwise().mean();
  const double denom = static_cast<double>(n - 1);
  const Eigen::MatrixXd c_pd = pa.transpose() * da / denom;
  Eigen::MatrixXd s = da.transpose() * da / denom;
  s.diagonal().array() += sigma_eps * sigma_eps;

  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    s.diagonal().array() += 1e-10;
    llt.compute(s);
    warnings.emplace_back("enkf_update: innovation covariance not positive definite, jitter 1e-10 added");
    if (llt.info() != Eigen::Success)
      throw NumericalError("enkf_update: innovation covariance singular after jitter");
  }

  Eigen::MatrixXd innov(n_obs, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index o = 0; o < n_obs; ++o)
      innov(o, i) = d(o) + sigma_eps * rng.normal() - predictions(i, o);
  const Eigen::MatrixXd gain_innov = c_pd * llt.solve(innov);
  params += gain_innov.transpose();
  if (!params.allFinite())
    throw NumericalError("enkf_update: non-finite analysis ensemble");
}

physics::KField Ensemble::member(std::size_t i) const
{
  physics::KField f;
  f.kind = physics::FieldKind::white;
  f.x_min = x_min;
  f.cell_width = cell_width;
  const auto row = members.row(static_cast<Eigen::Index>(i));
  f.node_values.assign(row.begin(), row.end());
  f.mean = row.mean();
  return f;
}

double Ensemble::averaged_mean() const
{
  return members.colwise().mean().mean();
}

double Ensemble::averaged_std() const
{
  const Eigen::MatrixXd centred = members.rowwise() - members.colwise().mean();
  const double denom = static_cast<double>(members.rows() - 1);
  return (centred.array().square().colwise().sum() / denom).sqrt().mean();
}

EnkfResult enkf_assimilate(const physics::MeasurementSet& measurements, const EnkfPrior& prior,
                           const core::Grid2D& grid, const physics::PhysicsConfig& cfg,
                           std::size_t n_ens, std::uint64_t seed)
{
  if (n_ens < 2)
    throw ContractError("enkf_assimilate: n_ens must be >= 2");
  const physics::FieldKind kind =
      prior.corr_len ? physics::FieldKind::exponential : physics::FieldKind::white;
  const physics::KFieldSampler sampler(kind, prior.mean, prior.std, prior.corr_len.value_or(0.0),
                                       grid);
  core::Rng field_rng(seed, 0);
  core::Rng obs_rng(seed, 1);

  Ensemble ens;
  ens.x_min = grid.x_min();
  ens.cell_width = grid.dx();
  ens.members.resize(static_cast<Eigen::Index>(n_ens), static_cast<Eigen::Index>(grid.n_x()));
  for (std::size_t i = 0; i < n_ens; ++i) {
    const physics::KField f = sampler.draw(field_rng);
    for (std::size_t c = 0; c < grid.n_x(); ++c)
      ens.members(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = f.node_values[c];
  }

  EnkfResult result;
  result.prior = ens;
  physics::PhysicsConfig member_cfg = cfg;
  for (const auto& group : measurements.grouped_by_time()) {
    const double t = group.front().t;
    const double sigma = group.front().sigma_eps;
    for (const auto& m : group)
      if (!(m.sigma_eps > 0.0) || m.sigma_eps != sigma)
        throw ContractError("enkf_assimilate: readings sharing a time need one sigma_eps > 0");
    Eigen::MatrixXd pred(static_cast<Eigen::Index>(n_ens), static_cast<Eigen::Index>(group.size()));
    for (std::size_t i = 0; i < n_ens; ++i) {
      member_cfg.k_field = ens.member(i);
      const std::vector<double> u = physics::solve_state_fv(member_cfg, grid, t);
      for (std::size_t o = 0; o < group.size(); ++o)
        pred(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(o)) = u[grid.nearest_x(group[o].x)];
    }
    Eigen::VectorXd d(static_cast<Eigen::Index>(group.size()));
    for (std::size_t o = 0; o < group.size(); ++o)
      d(static_cast<Eigen::Index>(o)) = group[o].d;
    enkf_update(ens.members, pred, d, sigma, obs_rng, result.warnings);
    result.steps.push_back({t, group.size(), ens.averaged_mean(), ens.averaged_std()});
  }
  result.posterior = ens;
  return result;
}

void write_ensemble(const std::filesystem::path& path, const Ensemble& ensemble)
{
  core::CsvWriter w(path, {"member", "x", "k"});
  for (std::size_t i = 0; i < ensemble.n_ens(); ++i)
    for (std::size_t c = 0; c < ensemble.n_cells(); ++c) {
      w.cell(i)
          .cell(ensemble.x_min + (static_cast<double>(c) + 0.5) * ensemble.cell_width)
          .cell(ensemble.members(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)));
      w.end_row();
    }
}

} // namespace damd::assimilate
