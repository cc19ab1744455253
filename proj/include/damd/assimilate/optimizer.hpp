#pragma once

#include "damd/mdist/closure.hpp"

#include <functional>
#include <string>
#include <vector>

namespace damd::assimilate {

struct OptimizerConfig
{
  /// Stop when max - min of the simplex losses drops below this.
  double tol = 1e-6;
  std::size_t max_iters = 400;
  /// Initial simplex edge: this fraction of |c| for linear coordinates
  /// (or of 1 when c = 0), and this many natural-log units for log coordinates.
  double initial_simplex_scale = 0.1;

  void validate() const;
};

struct NelderMeadResult
{
  std::vector<double> x;
  double value;
  std::size_t iterations;
  std::size_t evaluations;
  bool converged;
};

/// Unconstrained Nelder-Mead with reflection, expansion, contraction and
/// shrink coefficients (1, 2, 1/2, 1/2). `steps[i]` is the initial edge along
/// axis i.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& steps,
                             const OptimizerConfig& cfg);

/// Optimizable manifold coordinates. Standard deviations and correlation
/// lengths are searched in log space, which keeps them positive.
enum class Coord
{
  k_mean,
  k_std,
  k_corr_len,
  mu0,
  sigma0,
  mub,
  sigmab
};

std::string to_string(Coord c);
Coord coord_from_string(const std::string& s);
bool is_log_coord(Coord c);
double get_coord(const mdist::StatParams& phi, Coord c);
void set_coord(mdist::StatParams& phi, Coord c, double value);

struct ParamsResult
{
  mdist::StatParams phi;
  double loss;
  std::size_t iterations;
  std::size_t evaluations;
  bool converged;
};

/// Minimizes `objective` over the selected coordinates of phi, all others held
/// fixed. A log coordinate that starts at 0 is started from 1e-12 instead.
ParamsResult minimize_nelder_mead(const std::function<double(const mdist::StatParams&)>& objective,
                                  const mdist::StatParams& phi0, const std::vector<Coord>& coords,
                                  const OptimizerConfig& cfg);

} // namespace damd::assimilate
