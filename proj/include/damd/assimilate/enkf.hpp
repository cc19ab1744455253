#pragma once

#include "damd/core/grid.hpp"
#include "damd/core/rng.hpp"
#include "damd/physics/model.hpp"
#include "damd/physics/observations.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace damd::assimilate {

/// Perturbed-observation EnKF analysis of parameters augmented with predicted
/// observations. Row i of `params` and `predictions` belongs to member i.
/// Each member is moved by C_pd (C_dd + sigma_eps^2 I)^{-1} (d + eta_i - pred_i)
/// with eta_i ~ N(0, sigma_eps^2 I) drawn from `rng`, using sample
/// covariances. If the innovation covariance is not positive definite, 1e-10
/// is added to its diagonal and a warning is appended.
void enkf_update(Eigen::MatrixXd& params, const Eigen::MatrixXd& predictions,
                 const Eigen::VectorXd& d, double sigma_eps, core::Rng& rng,
                 std::vector<std::string>& warnings);

/// N_ens realizations of a piecewise-constant k field, one row per member.
struct Ensemble
{
  Eigen::MatrixXd members;
  double x_min = 0.0;
  double cell_width = 1.0;

  std::size_t n_ens() const { return static_cast<std::size_t>(members.rows()); }
  std::size_t n_cells() const { return static_cast<std::size_t>(members.cols()); }
  physics::KField member(std::size_t i) const;
  /// Ensemble mean per cell, averaged over x.
  double averaged_mean() const;
  /// Ensemble standard deviation per cell, averaged over x.
  double averaged_std() const;
};

struct EnkfPrior
{
  double mean;
  double std;
  /// Exponential covariance when set, white noise otherwise.
  std::optional<double> corr_len;
};

struct EnkfStep
{
  double t;
  std::size_t n_obs;
  double averaged_mean;
  double averaged_std;
};

struct EnkfResult
{
  Ensemble prior;
  Ensemble posterior;
  std::vector<EnkfStep> steps;
  std::vector<std::string> warnings;
};

/// Recursive EnKF over the measurement times: at every time, each member's
/// state is recomputed from t = 0 with the upwind solver and the readings at
/// that time are assimilated together.
EnkfResult enkf_assimilate(const physics::MeasurementSet& measurements, const EnkfPrior& prior,
                           const core::Grid2D& grid, const physics::PhysicsConfig& cfg,
                           std::size_t n_ens, std::uint64_t seed);

/// Writes `ensemble_posterior.csv` (member, x, k) at cell centres.
void write_ensemble(const std::filesystem::path& path, const Ensemble& ensemble);

} // namespace damd::assimilate
