#include "damd/core/distribution.hpp"

#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace damd::core {

namespace {

void require_ascending(const std::vector<double>& nodes, const char* what)
{
  if (nodes.size() < 2)
    throw ContractError(std::string(what) + ": need at least two nodes");
  for (std::size_t j = 1; j < nodes.size(); ++j)
    if (!(nodes[j] > nodes[j - 1]))
      throw ContractError(std::string(what) + ": nodes must be strictly ascending");
}

} // namespace

DiscreteCdf::DiscreteCdf(std::vector<double> u_nodes, std::vector<double> f_values)
  : u_nodes_(std::move(u_nodes)), f_values_(std::move(f_values))
{
  require_ascending(u_nodes_, "DiscreteCdf");
  if (u_nodes_.size() != f_values_.size())
    throw ContractError("DiscreteCdf: node/value length mismatch");
  if (std::abs(f_values_.front()) > 1e-9 || std::abs(f_values_.back() - 1.0) > 1e-9)
    throw ContractError("DiscreteCdf: endpoints must be 0 and 1");
  for (std::size_t j = 0; j < f_values_.size(); ++j) {
    const double f = f_values_[j];
    if (!std::isfinite(f) || f < -1e-9 || f > 1.0 + 1e-9)
      throw ContractError("DiscreteCdf: value outside [0, 1] at node " + std::to_string(j));
    if (j > 0 && f < f_values_[j - 1] - 1e-8)
      throw ContractError("DiscreteCdf: not monotone at node " + std::to_string(j));
  }
}

double DiscreteCdf::operator()(double u) const
{
  if (u <= u_nodes_.front())
    return u < u_nodes_.front() ? 0.0 : f_values_.front();
  if (u >= u_nodes_.back())
    return 1.0;
  const auto it = std::upper_bound(u_nodes_.begin(), u_nodes_.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - u_nodes_.begin());
  const double w = (u - u_nodes_[j - 1]) / (u_nodes_[j] - u_nodes_[j - 1]);
  return (1.0 - w) * f_values_[j - 1] + w * f_values_[j];
}

double DiscreteCdf::quantile(double p) const
{
  for (std::size_t j = 1; j < f_values_.size(); ++j) {
    if (f_values_[j] >= p) {
      const double df = f_values_[j] - f_values_[j - 1];
      if (df <= 0.0)
        return u_nodes_[j];
      const double w = std::clamp((p - f_values_[j - 1]) / df, 0.0, 1.0);
      return u_nodes_[j - 1] + w * (u_nodes_[j] - u_nodes_[j - 1]);
    }
  }
  return u_nodes_.back();
}

DiscretePdf::DiscretePdf(std::vector<double> u_nodes, std::vector<double> densities)
  : u_nodes_(std::move(u_nodes)), densities_(std::move(densities))
{
  require_ascending(u_nodes_, "DiscretePdf");
  if (u_nodes_.size() != densities_.size())
    throw ContractError("DiscretePdf: node/value length mismatch");
  for (double d : densities_)
    if (!std::isfinite(d) || d < 0.0)
      throw ContractError("DiscretePdf: densities must be finite and nonnegative");
  const double mass = trapezoid(u_nodes_, densities_);
  if (std::abs(mass - 1.0) > 1e-6)
    throw ContractError("DiscretePdf: trapezoid mass " + std::to_string(mass) + " != 1");
}

double DiscretePdf::mean() const
{
  std::vector<double> w(size());
  for (std::size_t j = 0; j < size(); ++j)
    w[j] = u_nodes_[j] * densities_[j];
  return trapezoid(u_nodes_, w);
}

double DiscretePdf::stddev() const
{
  const double m = mean();
  std::vector<double> w(size());
  for (std::size_t j = 0; j < size(); ++j)
    w[j] = (u_nodes_[j] - m) * (u_nodes_[j] - m) * densities_[j];
  return std::sqrt(std::max(trapezoid(u_nodes_, w), 0.0));
}

double DiscretePdf::mode() const
{
  const auto it = std::max_element(densities_.begin(), densities_.end());
  return u_nodes_[static_cast<std::size_t>(it - densities_.begin())];
}

GaussianDist::GaussianDist(double mean_, double std_) : mean(mean_), std(std_)
{
  if (!(std_ > 0.0) || !std::isfinite(std_) || !std::isfinite(mean_))
    throw ContractError("GaussianDist: std must be finite and > 0");
}

double GaussianDist::pdf(double u) const { return normal_pdf((u - mean) / std) / std; }

double GaussianDist::cdf(double u) const { return normal_cdf((u - mean) / std); }

double GaussianDist::log_pdf(double u) const
{
  const double z = (u - mean) / std;
  return -0.5 * z * z - std::log(std) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z)
{
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double trapezoid(std::span<const double> nodes, std::span<const double> values)
{
  if (nodes.size() != values.size())
    throw ContractError("trapezoid: node/value length mismatch");
  double acc = 0.0;
  for (std::size_t j = 1; j < nodes.size(); ++j)
    acc += 0.5 * (values[j] + values[j - 1]) * (nodes[j] - nodes[j - 1]);
  return acc;
}

void require_same_nodes(std::span<const double> a, std::span<const double> b,
                        const char* where)
{
  if (a.size() != b.size())
    throw ContractError(std::string(where) + ": node arrays differ in length");
  for (std::size_t j = 0; j < a.size(); ++j)
    if (std::abs(a[j] - b[j]) > 1e-12)
      throw ContractError(std::string(where) + ": node arrays differ at index " +
                          std::to_string(j));
}

} // namespace damd::core
