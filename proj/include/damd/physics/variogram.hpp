#pragma once

#include "damd/physics/model.hpp"

#include <vector>

namespace damd::physics {

struct VariogramBin
{
  double lag;     // bin centre
  double gamma;   // semivariance
  std::size_t pairs;
};

/// Empirical semivariogram gamma(h) = 1/(2 N(h)) sum (k(x_i) - k(x_j))^2 over
/// cell pairs with separation in the bin, pooled over all fields. Bins have
/// width `bin_width` and cover (0, max_lag]; empty bins are omitted.
/// Needs at least two fields sharing the same cell layout.
std::vector<VariogramBin> empirical_semivariogram(const std::vector<KField>& fields,
                                                  double bin_width, double max_lag);

/// Default binning: width 5 * cell width, out to half the field length.
std::vector<VariogramBin> empirical_semivariogram(const std::vector<KField>& fields);

} // namespace damd::physics
