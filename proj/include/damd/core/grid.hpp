#pragma once

#include <cstddef>
#include <vector>

namespace damd::core {

/// Tensor-product discretization of the physical coordinate x, the state
/// coordinate U and time. Both axes are node based: x has n_x + 1 nodes
/// x_min + i*dx and U has n_u + 1 nodes u_min + j*du.
class Grid2D
{
public:
  Grid2D(double x_min, double x_max, std::size_t n_x,
         double u_min, double u_max, std::size_t n_u,
         double dt, double t_end);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double u_min() const { return u_min_; }
  double u_max() const { return u_max_; }
  std::size_t n_x() const { return n_x_; }
  std::size_t n_u() const { return n_u_; }
  double dt() const { return dt_; }
  double t_end() const { return t_end_; }

  double dx() const { return (x_max_ - x_min_) / static_cast<double>(n_x_); }
  double du() const { return (u_max_ - u_min_) / static_cast<double>(n_u_); }

  double x_node(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx(); }
  double u_node(std::size_t j) const { return u_min_ + static_cast<double>(j) * du(); }

  std::vector<double> x_nodes() const;
  std::vector<double> u_nodes() const;

  /// Nearest x node to a physical location, clamped to the grid.
  std::size_t nearest_x(double x) const;

  /// Copy with a different time step / horizon (same spatial layout).
  Grid2D with_time(double dt, double t_end) const;
  /// Copy with a different number of U intervals.
  Grid2D with_nu(std::size_t n_u) const;

private:
  double x_min_, x_max_;
  std::size_t n_x_;
  double u_min_, u_max_;
  std::size_t n_u_;
  double dt_, t_end_;
};

/// Uniformly spaced nodes a, ..., b (count >= 2).
std::vector<double> linspace(double a, double b, std::size_t count);

} // namespace damd::core
