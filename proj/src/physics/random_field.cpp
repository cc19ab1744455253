#include "damd/physics/random_field.hpp"

#include "damd/core/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>

namespace damd::physics {

KFieldSampler::KFieldSampler(FieldKind kind, double mean, double std, double corr_len,
                             const core::Grid2D& grid)
  : kind_(kind), mean_(mean), std_(std), corr_len_(corr_len),
    x_min_(grid.x_min()), dx_(grid.dx()), n_cells_(grid.n_x())
{
  if (!(std >= 0.0))
    throw ContractError("sample_k_field: std must be >= 0");
  if (kind == FieldKind::exponential) {
    if (!(corr_len > 0.0))
      throw ContractError("sample_k_field: exponential kind needs corr_len > 0");
    const auto n = static_cast<Eigen::Index>(n_cells_);
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c)
        cov(r, c) = std * std * std::exp(-std::abs(static_cast<double>(r - c)) * dx_ / corr_len);
    cov.diagonal().array() += 1e-10;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
      throw NumericalError("sample_k_field: covariance not positive definite after jitter");
    chol_ = llt.matrixL();
  }
}

KField KFieldSampler::draw(core::Rng& rng) const
{
  KField f;
  f.kind = kind_;
  f.mean = mean_;
  f.std = std_;
  f.corr_len = corr_len_;
  f.x_min = x_min_;
  f.cell_width = dx_;
  f.node_values.assign(n_cells_, mean_);
  if (std_ == 0.0)
    return f;
  switch (kind_) {
  case FieldKind::constant: {
    const double k = rng.normal(mean_, std_);
    f.node_values.assign(n_cells_, k);
    break;
  }
  case FieldKind::white:
    for (double& k : f.node_values)
      k = rng.normal(mean_, std_);
    break;
  case FieldKind::exponential: {
    Eigen::VectorXd z(static_cast<Eigen::Index>(n_cells_));
    for (Eigen::Index r = 0; r < z.size(); ++r)
      z(r) = rng.normal();
    const Eigen::VectorXd y = chol_ * z;
    for (std::size_t c = 0; c < n_cells_; ++c)
      f.node_values[c] = mean_ + y(static_cast<Eigen::Index>(c));
    break;
  }
  }
  return f;
}

KField sample_k_field(FieldKind kind, double mean, double std, double corr_len,
                      const core::Grid2D& grid, std::uint64_t seed)
{
  core::Rng rng(seed);
  return KFieldSampler(kind, mean, std, corr_len, grid).draw(rng);
}

std::string to_string(MarginalFamily family)
{
  switch (family) {
  case MarginalFamily::normal: return "normal";
  case MarginalFamily::lognormal: return "lognormal";
  case MarginalFamily::uniform: return "uniform";
  }
  return "normal";
}

double marginal_quantile(MarginalFamily family, double mean, double std, double p)
{
  if (std == 0.0)
    return mean;
  switch (family) {
  case MarginalFamily::normal:
    return boost::math::quantile(boost::math::normal_distribution<double>(mean, std), p);
  case MarginalFamily::lognormal: {
    if (!(mean > 0.0))
      throw ContractError("lognormal family needs a positive mean");
    const double s2 = std::log1p(std * std / (mean * mean));
    const double m = std::log(mean) - 0.5 * s2;
    return std::exp(m + std::sqrt(s2) *
                          boost::math::quantile(boost::math::normal_distribution<double>(), p));
  }
  case MarginalFamily::uniform: {
    const double half = std::sqrt(3.0) * std;
    return mean - half + 2.0 * half * p;
  }
  }
  return mean;
}

std::vector<double> sample_constant_k(MarginalFamily family, double mean, double std,
                                      std::size_t n, std::uint64_t seed)
{
  core::Rng rng(seed);
  std::vector<double> out(n);
  for (double& k : out) {
    // open interval keeps the normal quantile finite
    const double p = (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1.0p-53;
    k = marginal_quantile(family, mean, std, p);
  }
  return out;
}

} // namespace damd::physics
