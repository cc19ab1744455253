#pragma once

#include "damd/core/grid.hpp"

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace damd::physics {

enum class FieldKind
{
  constant,
  white,
  exponential
};

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& s);

/// Piecewise-constant reaction-rate field k(x): one value per grid cell
/// [x_min + c*dx, x_min + (c+1)*dx]. Beyond the last cell the last value
/// is extended.
struct KField
{
  FieldKind kind = FieldKind::constant;
  double mean = 1.0;
  double std = 0.0;
  double corr_len = 0.0;
  double x_min = 0.0;
  double cell_width = 1.0;
  std::vector<double> node_values;

  /// Constant field with the given value over n cells.
  static KField uniform(double value, double x_min, double cell_width, std::size_t n_cells);

  /// Throws ContractError unless the invariants hold.
  void validate() const;

  double at(double x) const;
  /// Exact integral of the piecewise-constant field over [a, b], a <= b.
  double integral(double a, double b) const;
  double spatial_mean() const;
  double spatial_std() const;
};

/// Advection-reaction problem u_t + v u_x = -k(x) u on x > 0 with
/// u(x, 0) = u0 and u(0, t) = ub + a sin(2 pi nu t + phase).
struct PhysicsConfig
{
  double v = 1.0;
  double u0 = 0.4;
  double ub = 0.5;
  double a = 0.1;
  double nu = 1.0;
  double phase = 1.5 * std::numbers::pi;
  KField k_field = KField::uniform(1.0, 0.0, 1.0, 1);

  void validate(double u_min, double u_max) const;
};

/// Inflow value ub + a sin(2 pi nu t + phase).
double forcing(double t, const PhysicsConfig& cfg);

/// Oscillatory part of the inflow, a sin(2 pi nu t + phase).
double forcing_offset(double t, const PhysicsConfig& cfg);

/// Exact solution along characteristics for the configured k field.
double analytic_state(double x, double t, const PhysicsConfig& cfg);

/// Upwind, backward-Euler finite-volume solve of the physical model on the
/// x nodes of `grid` from t = 0 to `t_end` (the final step is shortened so
/// that t_end is hit exactly). Returns u at every x node.
std::vector<double> solve_state_fv(const PhysicsConfig& cfg, const core::Grid2D& grid,
                                   double t_end);

} // namespace damd::physics
