#pragma once

#include "damd/core/grid.hpp"
#include "damd/core/rng.hpp"
#include "damd/physics/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace damd::physics {

/// Draws realizations of a Gaussian k field on the cells of a grid.
///
/// constant: one N(mean, std^2) draw shared by all cells;
/// white: i.i.d. N(mean, std^2) per cell;
/// exponential: joint Gaussian with covariance std^2 exp(-|x - x'| / corr_len)
/// between cell centres, via Cholesky with 1e-10 diagonal jitter.
class KFieldSampler
{
public:
  KFieldSampler(FieldKind kind, double mean, double std, double corr_len,
                const core::Grid2D& grid);

  KField draw(core::Rng& rng) const;
  std::size_t n_cells() const { return n_cells_; }

private:
  FieldKind kind_;
  double mean_, std_, corr_len_;
  double x_min_, dx_;
  std::size_t n_cells_;
  Eigen::MatrixXd chol_;
};

KField sample_k_field(FieldKind kind, double mean, double std, double corr_len,
                      const core::Grid2D& grid, std::uint64_t seed);

/// Marginal families with matched first two moments, used by the Monte Carlo
/// robustness study.
enum class MarginalFamily
{
  normal,
  lognormal,
  uniform
};

std::string to_string(MarginalFamily family);

/// Inverse CDF of the family with the given mean and standard deviation.
/// Lognormal parameters solve s_ln^2 = ln(1 + std^2/mean^2), m_ln = ln(mean) - s_ln^2 / 2;
/// the uniform half-width is sqrt(3) * std.
double marginal_quantile(MarginalFamily family, double mean, double std, double p);

/// n draws of a scalar reaction rate. Every family is driven by the same
/// uniform stream (inverse-transform sampling), so families built with the
/// same seed are coupled sample by sample.
std::vector<double> sample_constant_k(MarginalFamily family, double mean, double std,
                                      std::size_t n, std::uint64_t seed);

} // namespace damd::physics
