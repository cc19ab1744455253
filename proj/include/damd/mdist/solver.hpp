#pragma once

#include "damd/core/distribution.hpp"
#include "damd/core/grid.hpp"
#include "damd/mdist/closure.hpp"
#include "damd/mdist/inputs.hpp"
#include "damd/physics/model.hpp"

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace damd::mdist {

/// F values on the (x, U) nodes of a grid at one time level, row-major in x.
struct CdfSnapshot
{
  double t;
  std::vector<double> values;
};

struct CdfSolution
{
  core::Grid2D grid;
  std::size_t n_x_solved;   // x nodes 0..n_x_solved were advanced
  std::vector<CdfSnapshot> snapshots;
  double min_forward_difference = 0.0;   // over every time level, in U
  std::vector<std::string> warnings;

  double at(std::size_t snapshot, std::size_t i, std::size_t j) const
  {
    return snapshots[snapshot].values[i * (grid.n_u() + 1) + j];
  }
  /// U-slice at the x node nearest to `x` (must lie in the solved range).
  core::DiscreteCdf slice(std::size_t snapshot, double x) const;
  core::DiscreteCdf slice_at_node(std::size_t snapshot, std::size_t i) const;
  const CdfSnapshot& final_snapshot() const { return snapshots.back(); }
};

struct FvOptions
{
  /// Store a snapshot every this many steps (0: only t = 0 and the final time).
  std::size_t snapshot_every = 0;
  /// Only x nodes with x <= x_limit are advanced. Upwinding in x makes the
  /// solution there independent of nodes further downstream.
  double x_limit = std::numeric_limits<double>::infinity();
};

/// Backward-Euler finite-volume solve of the CDF equation from t = 0 to t_end.
///
/// Advection is first-order upwind in both x and U and the U diffusion is
/// central. With q1 = v > 0 the implicit system is block lower-triangular in
/// x, so each step is solved exactly by a sweep over x nodes with one
/// tridiagonal (Thomas) solve in U per node. Boundary rows hold
/// F(U_min) = 0, F(U_max) = 1 and the inflow column holds Fb(U, t).
/// The last step is shortened to land on t_end.
CdfSolution solve_cdf_fv(const ClosureSpec& spec, const StatParams& phi,
                         const physics::PhysicsConfig& cfg, bool deterministic_inputs,
                         const core::Grid2D& grid, double t_end, const FvOptions& opts = {});

/// Exact solution by characteristics when k is deterministic (k given by the
/// caller): x > v t gives F0(U e^{k t}), otherwise Fb(U e^{k x / v}; t - x / v).
core::DiscreteCdf solve_cdf_characteristics(double k, const StatParams& phi,
                                            const physics::PhysicsConfig& cfg,
                                            bool deterministic_inputs, double x, double t,
                                            const std::vector<double>& u_nodes);

enum class SolverRoute
{
  automatic,        // characteristics when exact, finite volumes otherwise
  fv,
  characteristics
};

std::string to_string(SolverRoute r);
SolverRoute solver_route_from_string(const std::string& s);

/// Everything needed to turn manifold coordinates into a CDF at (x, t).
struct ForecastModel
{
  ClosureSpec spec;
  physics::PhysicsConfig cfg;
  bool deterministic_inputs = true;
  core::Grid2D grid;
  SolverRoute route = SolverRoute::automatic;

  /// True when the characteristics route is taken.
  bool uses_characteristics() const;

  /// CDF over the grid's U nodes at the x node nearest to `x`, time `t`.
  core::DiscreteCdf slice(const StatParams& phi, double x, double t) const;

  /// Finite-volume solve up to `t` advancing only the nodes needed to reach
  /// `x_limit`.
  CdfSolution solve(const StatParams& phi, double t, double x_limit,
                    std::size_t snapshot_every = 0) const;

  /// Whole-grid solution through the selected route. The characteristics
  /// route fills snapshots at the same times the finite-volume route would.
  CdfSolution profile(const StatParams& phi, double t, std::size_t snapshot_every = 0) const;
};

/// Writes `cdf_profile.csv` rows (t, x, U, F) for every stored snapshot.
void write_cdf_profile(const std::filesystem::path& path, const CdfSolution& sol);

} // namespace damd::mdist
