#include "damd/core/grid.hpp"

#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace damd::core {

Grid2D::Grid2D(double x_min, double x_max, std::size_t n_x,
               double u_min, double u_max, std::size_t n_u,
               double dt, double t_end)
  : x_min_(x_min), x_max_(x_max), n_x_(n_x),
    u_min_(u_min), u_max_(u_max), n_u_(n_u),
    dt_(dt), t_end_(t_end)
{
  if (!(x_min < x_max))
    throw ContractError("Grid2D: x_min must be < x_max");
  if (!(u_min < u_max))
    throw ContractError("Grid2D: u_min must be < u_max");
  if (n_x < 2 || n_u < 2)
    throw ContractError("Grid2D: n_x and n_u must be >= 2");
  if (!(dt > 0.0))
    throw ContractError("Grid2D: dt must be > 0");
  if (!(t_end >= dt))
    throw ContractError("Grid2D: t_end must be >= dt");
  if (!(dx() > 0.0) || !(du() > 0.0))
    throw ContractError("Grid2D: degenerate cell width");
}

std::vector<double> Grid2D::x_nodes() const
{
  std::vector<double> out(n_x_ + 1);
  for (std::size_t i = 0; i <= n_x_; ++i)
    out[i] = x_node(i);
  return out;
}

std::vector<double> Grid2D::u_nodes() const
{
  std::vector<double> out(n_u_ + 1);
  for (std::size_t j = 0; j <= n_u_; ++j)
    out[j] = u_node(j);
  out.back() = u_max_;
  return out;
}

std::size_t Grid2D::nearest_x(double x) const
{
  const double pos = std::round((x - x_min_) / dx());
  if (pos <= 0.0)
    return 0;
  return std::min(static_cast<std::size_t>(pos), n_x_);
}

Grid2D Grid2D::with_time(double dt, double t_end) const
{
  return Grid2D(x_min_, x_max_, n_x_, u_min_, u_max_, n_u_, dt, t_end);
}

Grid2D Grid2D::with_nu(std::size_t n_u) const
{
  return Grid2D(x_min_, x_max_, n_x_, u_min_, u_max_, n_u, dt_, t_end_);
}

std::vector<double> linspace(double a, double b, std::size_t count)
{
  if (count < 2)
    throw ContractError("linspace: need at least two nodes");
  std::vector<double> out(count);
  const double h = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = a + static_cast<double>(i) * h;
  out.back() = b;
  return out;
}

} // namespace damd::core
