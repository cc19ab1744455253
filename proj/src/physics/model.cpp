#include "damd/physics/model.hpp"

#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace damd::physics {

std::string to_string(FieldKind kind)
{
  switch (kind) {
  case FieldKind::constant: return "constant";
  case FieldKind::white: return "white";
  case FieldKind::exponential: return "exponential";
  }
  return "constant";
}

FieldKind field_kind_from_string(const std::string& s)
{
  if (s == "constant")
    return FieldKind::constant;
  if (s == "white")
    return FieldKind::white;
  if (s == "exponential")
    return FieldKind::exponential;
  throw ValidationError("unknown field kind '" + s + "' (constant | white | exponential)");
}

KField KField::uniform(double value, double x_min, double cell_width, std::size_t n_cells)
{
  KField f;
  f.kind = FieldKind::constant;
  f.mean = value;
  f.std = 0.0;
  f.x_min = x_min;
  f.cell_width = cell_width;
  f.node_values.assign(n_cells, value);
  return f;
}

void KField::validate() const
{
  if (!(std >= 0.0))
    throw ContractError("KField: std must be >= 0");
  if (kind == FieldKind::exponential && !(corr_len > 0.0))
    throw ContractError("KField: exponential field needs corr_len > 0");
  if (node_values.empty())
    throw ContractError("KField: no cell values");
  if (!(cell_width > 0.0))
    throw ContractError("KField: cell width must be > 0");
  for (double k : node_values)
    if (!std::isfinite(k))
      throw ContractError("KField: non-finite cell value");
}

double KField::at(double x) const
{
  const double pos = (x - x_min) / cell_width;
  if (pos <= 0.0)
    return node_values.front();
  const auto c = static_cast<std::size_t>(pos);
  return node_values[std::min(c, node_values.size() - 1)];
}

double KField::integral(double a, double b) const
{
  if (b <= a)
    return 0.0;
  const std::size_t n = node_values.size();
  const double x_last = x_min + static_cast<double>(n) * cell_width;
  double acc = 0.0;
  // below the first cell and above the last one the edge values extend
  if (a < x_min) {
    acc += node_values.front() * (std::min(b, x_min) - a);
    a = x_min;
  }
  if (b > x_last) {
    acc += node_values.back() * (b - std::max(a, x_last));
    b = x_last;
  }
  if (b <= a)
    return acc;
  auto c = static_cast<std::size_t>(std::floor((a - x_min) / cell_width));
  c = std::min(c, n - 1);
  double lo = a;
  while (lo < b && c < n) {
    const double cell_hi = x_min + static_cast<double>(c + 1) * cell_width;
    const double hi = (c + 1 == n) ? b : std::min(b, cell_hi);
    acc += node_values[c] * (hi - lo);
    lo = hi;
    ++c;
  }
  return acc;
}

double KField::spatial_mean() const
{
  double acc = 0.0;
  for (double k : node_values)
    acc += k;
  return acc / static_cast<double>(node_values.size());
}

double KField::spatial_std() const
{
  if (node_values.size() < 2)
    return 0.0;
  const double m = spatial_mean();
  double acc = 0.0;
  for (double k : node_values)
    acc += (k - m) * (k - m);
  return std::sqrt(acc / static_cast<double>(node_values.size() - 1));
}

void PhysicsConfig::validate(double u_min, double u_max) const
{
  if (!(v > 0.0))
    throw ContractError("PhysicsConfig: v must be > 0");
  if (u0 < u_min || u0 > u_max)
    throw ContractError("PhysicsConfig: u0 outside [u_min, u_max]");
  if (ub < u_min || ub > u_max)
    throw ContractError("PhysicsConfig: ub outside [u_min, u_max]");
  k_field.validate();
}

double forcing_offset(double t, const PhysicsConfig& cfg)
{
  return cfg.a * std::sin(2.0 * std::numbers::pi * cfg.nu * t + cfg.phase);
}

double forcing(double t, const PhysicsConfig& cfg) { return cfg.ub + forcing_offset(t, cfg); }

double analytic_state(double x, double t, const PhysicsConfig& cfg)
{
  const double foot = x - cfg.v * t;
  if (foot > 0.0)
    return cfg.u0 * std::exp(-cfg.k_field.integral(foot, x) / cfg.v);
  return forcing(t - x / cfg.v, cfg) * std::exp(-cfg.k_field.integral(0.0, x) / cfg.v);
}

std::vector<double> solve_state_fv(const PhysicsConfig& cfg, const core::Grid2D& grid,
                                   double t_end)
{
  const std::size_t nx = grid.n_x();
  const double dx = grid.dx();
  std::vector<double> k(nx + 1, 0.0);
  for (std::size_t i = 1; i <= nx; ++i)
    k[i] = cfg.k_field.at(grid.x_node(i) - 0.5 * dx);

  std::vector<double> u(nx + 1, cfg.u0);
  u[0] = forcing(0.0, cfg);
  double t = 0.0;
  while (t < t_end - 1e-12) {
    const double dt = std::min(grid.dt(), t_end - t);
    t += dt;
    u[0] = forcing(t, cfg);
    const double cx = cfg.v / dx;
    for (std::size_t i = 1; i <= nx; ++i)
      u[i] = (u[i] / dt + cx * u[i - 1]) / (1.0 / dt + cx + k[i]);
  }
  return u;
}

} // namespace damd::physics
