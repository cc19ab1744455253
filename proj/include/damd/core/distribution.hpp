#pragma once

#include <span>
#include <vector>

namespace damd::core {

/// CDF values sampled on ascending state nodes.
///
/// Invariants (checked on construction): first value 0 and last value 1
/// within 1e-9, nondecreasing within 1e-8, every value in [-1e-9, 1 + 1e-9].
class DiscreteCdf
{
public:
  DiscreteCdf(std::vector<double> u_nodes, std::vector<double> f_values);

  const std::vector<double>& u_nodes() const { return u_nodes_; }
  const std::vector<double>& values() const { return f_values_; }
  std::size_t size() const { return u_nodes_.size(); }

  /// Linear interpolation, 0 below the first node and 1 above the last.
  double operator()(double u) const;
  /// Smallest U (linearly interpolated) where the CDF reaches p.
  double quantile(double p) const;

private:
  std::vector<double> u_nodes_;
  std::vector<double> f_values_;
};

/// Probability density sampled on ascending state nodes; nonnegative with
/// unit trapezoid mass (within 1e-6).
class DiscretePdf
{
public:
  DiscretePdf(std::vector<double> u_nodes, std::vector<double> densities);

  const std::vector<double>& u_nodes() const { return u_nodes_; }
  const std::vector<double>& values() const { return densities_; }
  std::size_t size() const { return u_nodes_.size(); }

  double mean() const;
  double stddev() const;
  /// Node with the largest density.
  double mode() const;

private:
  std::vector<double> u_nodes_;
  std::vector<double> densities_;
};

struct GaussianDist
{
  double mean;
  double std;

  GaussianDist(double mean, double std);

  double pdf(double u) const;
  double cdf(double u) const;
  double log_pdf(double u) const;
};

/// Standard normal CDF and density.
double normal_cdf(double z);
double normal_pdf(double z);

/// Composite trapezoid rule over (possibly nonuniform) ascending nodes.
double trapezoid(std::span<const double> nodes, std::span<const double> values);

/// Throws ContractError unless both node arrays agree to 1e-12.
void require_same_nodes(std::span<const double> a, std::span<const double> b,
                        const char* where);

} // namespace damd::core
