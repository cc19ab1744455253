#pragma once

#include "damd/core/distribution.hpp"

#include <span>
#include <vector>

namespace damd::core {

/// L2 distance between two CDFs on shared nodes (Cramer distance, not squared).
double cramer_distance(const DiscreteCdf& a, const DiscreteCdf& b);

/// Densities below this are floored before taking logarithms.
inline constexpr double density_floor = 1e-12;

/// D_KL(p || q) by trapezoid quadrature of p ln(p/q).
double kl_divergence(const DiscretePdf& p, const DiscretePdf& q);

/// Central differences in U (one-sided at the ends), negative values clipped,
/// then rescaled to unit mass.
DiscretePdf pdf_from_cdf(const DiscreteCdf& c);

/// Cumulative trapezoid integral, affinely mapped so the ends are exactly 0 and 1.
DiscreteCdf cdf_from_pdf(const DiscretePdf& p);

/// Gaussian kernel density estimate with Scott's bandwidth std * n^(-1/5).
DiscretePdf kde_gaussian(std::span<const double> samples, std::vector<double> u_nodes);

/// Scott's rule bandwidth for a 1-D sample.
double scott_bandwidth(std::span<const double> samples);

/// Fraction of samples <= U at every node; the ends are pinned to 0 and 1.
DiscreteCdf empirical_cdf(std::span<const double> samples, std::vector<double> u_nodes);

/// Sup-norm of the difference of two CDFs on shared nodes.
double sup_distance(const DiscreteCdf& a, const DiscreteCdf& b);

/// Sample mean and (n - 1) standard deviation.
double sample_mean(std::span<const double> xs);
double sample_std(std::span<const double> xs);

} // namespace damd::core
