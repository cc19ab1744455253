#include "damd/physics/variogram.hpp"

#include "damd/core/errors.hpp"

#include <cmath>

namespace damd::physics {

std::vector<VariogramBin> empirical_semivariogram(const std::vector<KField>& fields,
                                                  double bin_width, double max_lag)
{
  if (fields.size() < 2)
    throw ContractError("empirical_semivariogram: need at least two fields");
  if (!(bin_width > 0.0) || !(max_lag > 0.0))
    throw ContractError("empirical_semivariogram: bin width and max lag must be > 0");
  const std::size_t n = fields.front().node_values.size();
  const double dx = fields.front().cell_width;
  for (const auto& f : fields)
    if (f.node_values.size() != n || f.cell_width != dx)
      throw ContractError("empirical_semivariogram: fields have different layouts");

  const auto n_bins = static_cast<std::size_t>(std::ceil(max_lag / bin_width - 1e-9));
  std::vector<double> sum(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  for (std::size_t lag_cells = 1; lag_cells < n; ++lag_cells) {
    const double h = static_cast<double>(lag_cells) * dx;
    if (h > max_lag + 1e-12)
      break;
    const auto b = std::min(static_cast<std::size_t>(std::ceil(h / bin_width - 1e-9)) - 1,
                            n_bins - 1);
    for (const auto& f : fields) {
      for (std::size_t i = 0; i + lag_cells < n; ++i) {
        const double diff = f.node_values[i + lag_cells] - f.node_values[i];
        sum[b] += diff * diff;
        ++count[b];
      }
    }
  }
  std::vector<VariogramBin> out;
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (count[b] == 0)
      continue;
    out.push_back({(static_cast<double>(b) + 0.5) * bin_width,
                   sum[b] / (2.0 * static_cast<double>(count[b])), count[b]});
  }
  return out;
}

std::vector<VariogramBin> empirical_semivariogram(const std::vector<KField>& fields)
{
  if (fields.empty())
    throw ContractError("empirical_semivariogram: need at least two fields");
  const auto& f = fields.front();
  const double length = static_cast<double>(f.node_values.size()) * f.cell_width;
  return empirical_semivariogram(fields, 5.0 * f.cell_width, 0.5 * length);
}

} // namespace damd::physics
