#include "damd/core/density.hpp"

#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace damd::core {

double cramer_distance(const DiscreteCdf& a, const DiscreteCdf& b)
{
  require_same_nodes(a.u_nodes(), b.u_nodes(), "cramer_distance");
  std::vector<double> sq(a.size());
  for (std::size_t j = 0; j < sq.size(); ++j) {
    const double d = a.values()[j] - b.values()[j];
    sq[j] = d * d;
  }
  return std::sqrt(std::max(trapezoid(a.u_nodes(), sq), 0.0));
}

double kl_divergence(const DiscretePdf& p, const DiscretePdf& q)
{
  require_same_nodes(p.u_nodes(), q.u_nodes(), "kl_divergence");
  std::vector<double> integrand(p.size());
  for (std::size_t j = 0; j < integrand.size(); ++j) {
    const double pj = std::max(p.values()[j], density_floor);
    const double qj = std::max(q.values()[j], density_floor);
    integrand[j] = pj * std::log(pj / qj);
  }
  return trapezoid(p.u_nodes(), integrand);
}

DiscretePdf pdf_from_cdf(const DiscreteCdf& c)
{
  const auto& u = c.u_nodes();
  const auto& f = c.values();
  const std::size_t n = u.size();
  std::vector<double> dens(n);
  dens[0] = (f[1] - f[0]) / (u[1] - u[0]);
  dens[n - 1] = (f[n - 1] - f[n - 2]) / (u[n - 1] - u[n - 2]);
  for (std::size_t j = 1; j + 1 < n; ++j)
    dens[j] = (f[j + 1] - f[j - 1]) / (u[j + 1] - u[j - 1]);
  for (double& d : dens)
    d = std::max(d, 0.0);
  const double mass = trapezoid(u, dens);
  if (!(mass > 0.0))
    throw DegenerateInput("pdf_from_cdf: CDF has no increase");
  for (double& d : dens)
    d /= mass;
  return DiscretePdf(u, std::move(dens));
}

DiscreteCdf cdf_from_pdf(const DiscretePdf& p)
{
  const auto& u = p.u_nodes();
  const auto& d = p.values();
  std::vector<double> f(u.size(), 0.0);
  for (std::size_t j = 1; j < u.size(); ++j)
    f[j] = f[j - 1] + 0.5 * (d[j] + d[j - 1]) * (u[j] - u[j - 1]);
  const double total = f.back() - f.front();
  if (!(total > 0.0))
    throw DegenerateInput("cdf_from_pdf: zero total mass");
  for (double& v : f)
    v = std::clamp((v - f.front()) / total, 0.0, 1.0);
  f.front() = 0.0;
  f.back() = 1.0;
  return DiscreteCdf(u, std::move(f));
}

double sample_mean(std::span<const double> xs)
{
  if (xs.empty())
    throw ContractError("sample_mean: empty sample");
  double acc = 0.0;
  for (double x : xs)
    acc += x;
  return acc / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs)
{
  if (xs.size() < 2)
    throw ContractError("sample_std: need at least two samples");
  const double m = sample_mean(xs);
  double acc = 0.0;
  for (double x : xs)
    acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

double scott_bandwidth(std::span<const double> samples)
{
  if (samples.size() < 2)
    throw DegenerateInput("kde_gaussian: need at least two samples");
  const double h = sample_std(samples) *
                   std::pow(static_cast<double>(samples.size()), -0.2);
  if (!(h > 0.0))
    throw DegenerateInput("kde_gaussian: all samples identical (zero bandwidth)");
  return h;
}

DiscretePdf kde_gaussian(std::span<const double> samples, std::vector<double> u_nodes)
{
  const double h = scott_bandwidth(samples);
  std::vector<double> dens(u_nodes.size(), 0.0);
  for (std::size_t j = 0; j < u_nodes.size(); ++j) {
    double acc = 0.0;
    for (double s : samples)
      acc += normal_pdf((u_nodes[j] - s) / h);
    dens[j] = acc / (h * static_cast<double>(samples.size()));
  }
  const double mass = trapezoid(u_nodes, dens);
  if (!(mass > 0.0))
    throw DegenerateInput("kde_gaussian: samples lie outside the node range");
  for (double& d : dens)
    d /= mass;
  return DiscretePdf(std::move(u_nodes), std::move(dens));
}

DiscreteCdf empirical_cdf(std::span<const double> samples, std::vector<double> u_nodes)
{
  if (samples.empty())
    throw ContractError("empirical_cdf: need at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> f(u_nodes.size());
  for (std::size_t j = 0; j < u_nodes.size(); ++j) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), u_nodes[j]);
    f[j] = static_cast<double>(it - sorted.begin()) / n;
  }
  f.front() = 0.0;
  f.back() = 1.0;
  return DiscreteCdf(std::move(u_nodes), std::move(f));
}

double sup_distance(const DiscreteCdf& a, const DiscreteCdf& b)
{
  require_same_nodes(a.u_nodes(), b.u_nodes(), "sup_distance");
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    m = std::max(m, std::abs(a.values()[j] - b.values()[j]));
  return m;
}

} // namespace damd::core
