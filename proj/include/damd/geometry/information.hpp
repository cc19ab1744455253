#pragma once

#include "damd/core/distribution.hpp"
#include "damd/mdist/solver.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace damd::geometry {

struct FimMatrix
{
  std::vector<std::string> coords;
  Eigen::MatrixXd g;

  bool is_symmetric(double tol = 1e-8) const;
  /// Smallest eigenvalue of the symmetric part.
  double min_eigenvalue() const;
};

/// Density of the family at a point of its coordinate space.
using DensityFamily = std::function<core::DiscretePdf(const std::vector<double>& point)>;

/// g_jk = int d_j ln f * d_k ln f * f dU, with d_j a five-point central difference of
/// ln f (density floored at 1e-12) using the step h_rel * max(|c_j|, 1).
/// Only the upper triangle is computed; the lower one is its mirror.
FimMatrix fisher_information(const DensityFamily& family, const std::vector<std::string>& names,
                             const std::vector<double>& point, double h_rel = 1e-3);

/// CDF slice at an arbitrary x: characteristics evaluate x directly, finite
/// volumes interpolate linearly between the two bracketing x nodes.
core::DiscreteCdf slice_at(const mdist::ForecastModel& model, const mdist::StatParams& phi,
                           double x, double t);

/// FIM of the model density f_u(U; x, t, phi). `coords` may contain "x", "t"
/// and manifold coordinate names (k_mean, k_std, k_corr_len, mu0, sigma0,
/// mub, sigmab).
FimMatrix fisher_information(const mdist::ForecastModel& model, const mdist::StatParams& phi,
                             double x, double t, const std::vector<std::string>& coords,
                             double h_rel = 1e-3);

struct KlPoint
{
  double x;
  double dkl;
};

/// D_KL(posterior || prior) of the one-point densities at time t, for every
/// x node of the model grid.
std::vector<KlPoint> kl_gain_profile(const mdist::ForecastModel& model,
                                     const mdist::StatParams& phi_prior,
                                     const mdist::StatParams& phi_post, double t);

/// Writes `fim.csv` (coord_i, coord_j, g_ij).
void write_fim(const std::filesystem::path& path, const FimMatrix& fim);
/// Writes `kl_profile.csv` (x, dkl).
void write_kl_profile(const std::filesystem::path& path, const std::vector<KlPoint>& profile);

} // namespace damd::geometry
