#include "damd/mdist/closure.hpp"

#include "damd/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace damd::mdist {

void StatParams::validate() const
{
  if (!std::isfinite(k_mean))
    throw ContractError("StatParams: k_mean must be finite");
  if (!(k_std >= 0.0) || !std::isfinite(k_std))
    throw ContractError("StatParams: k_std must be >= 0");
  if (k_corr_len && !(*k_corr_len > 0.0))
    throw ContractError("StatParams: k_corr_len must be > 0");
  if (sigma0 && !(*sigma0 > 0.0))
    throw ContractError("StatParams: sigma0 must be > 0");
  if (sigmab && !(*sigmab > 0.0))
    throw ContractError("StatParams: sigmab must be > 0");
}

std::string to_string(ClosureFamily f)
{
  switch (f) {
  case ClosureFamily::exact_deterministic_k: return "exact_deterministic_k";
  case ClosureFamily::random_constant_k: return "random_constant_k";
  case ClosureFamily::white_noise_k: return "white_noise_k";
  case ClosureFamily::exponential_k: return "exponential_k";
  case ClosureFamily::general_quadrature: return "general_quadrature";
  }
  return "";
}

ClosureFamily closure_family_from_string(const std::string& s)
{
  for (auto f : {ClosureFamily::exact_deterministic_k, ClosureFamily::random_constant_k,
                 ClosureFamily::white_noise_k, ClosureFamily::exponential_k,
                 ClosureFamily::general_quadrature})
    if (to_string(f) == s)
      return f;
  throw ValidationError("unknown closure family '" + s + "'");
}

std::string to_string(SignConvention s)
{
  return s == SignConvention::appendix ? "appendix" : "main_text";
}

SignConvention sign_convention_from_string(const std::string& s)
{
  if (s == "appendix")
    return SignConvention::appendix;
  if (s == "main_text")
    return SignConvention::main_text;
  throw ValidationError("unknown sign convention '" + s + "' (appendix | main_text)");
}

std::string to_string(QuadratureKernel k)
{
  switch (k) {
  case QuadratureKernel::custom: return "custom";
  case QuadratureKernel::constant: return "constant";
  case QuadratureKernel::white: return "white";
  case QuadratureKernel::exponential: return "exponential";
  }
  return "";
}

QuadratureKernel quadrature_kernel_from_string(const std::string& s)
{
  for (auto k : {QuadratureKernel::custom, QuadratureKernel::constant, QuadratureKernel::white,
                 QuadratureKernel::exponential})
    if (to_string(k) == s)
      return k;
  throw ValidationError("unknown quadrature kernel '" + s + "'");
}

CovarianceModel CovarianceModel::constant(double variance)
{
  return {0.0, [variance](double) { return variance; }};
}

CovarianceModel CovarianceModel::white(double variance)
{
  return {variance, [](double) { return 0.0; }};
}

CovarianceModel CovarianceModel::exponential(double variance, double corr_len)
{
  return {0.0, [variance, corr_len](double h) { return variance * std::exp(-std::abs(h) / corr_len); }};
}

double t_star(double u, double x, double t, double k_mean, double u_max, double v)
{
  double ts = std::min(t, x / v);
  if (u > 0.0 && k_mean > 0.0)
    ts = std::min(ts, std::log(u_max / u) / k_mean);
  return std::max(ts, 0.0);
}

namespace {

/// (e^{a t} - 1) / a with the a -> 0 limit t.
double expm1_over(double a, double t)
{
  if (std::abs(a) < 1e-10)
    return t;
  return std::expm1(a * t) / a;
}

CovarianceModel kernel_for(const ClosureSpec& spec, const StatParams& phi)
{
  const double var = phi.k_std * phi.k_std;
  switch (spec.kernel) {
  case QuadratureKernel::custom: return spec.covariance;
  case QuadratureKernel::constant: return CovarianceModel::constant(var);
  case QuadratureKernel::white: return CovarianceModel::white(var);
  case QuadratureKernel::exponential:
    if (!phi.k_corr_len)
      throw ContractError("exponential quadrature kernel needs k_corr_len");
    return CovarianceModel::exponential(var, *phi.k_corr_len);
  }
  return spec.covariance;
}

double quadrature_integral(const ClosureSpec& spec, const StatParams& phi, double tstar)
{
  const CovarianceModel cov = kernel_for(spec, phi);
  double acc = 0.5 * cov.nugget;
  if (tstar <= 0.0 || !cov.continuous)
    return acc;
  const std::size_t n = std::max<std::size_t>(spec.quadrature_intervals, 1);
  const double h = tstar / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t q = 0; q <= n; ++q) {
    const double tau = static_cast<double>(q) * h;
    const double w = (q == 0 || q == n) ? 0.5 : 1.0;
    sum += w * std::exp(phi.k_mean * tau) * cov.continuous(spec.v * tau);
  }
  return acc + sum * h;
}

} // namespace

double memory_integral(const ClosureSpec& spec, const StatParams& phi, double tstar)
{
  const double var = phi.k_std * phi.k_std;
  switch (spec.family) {
  case ClosureFamily::exact_deterministic_k:
    return 0.0;
  case ClosureFamily::random_constant_k:
    return var * expm1_over(phi.k_mean, tstar);
  case ClosureFamily::white_noise_k:
    return 0.5 * var;
  case ClosureFamily::exponential_k: {
    if (!phi.k_corr_len)
      throw ContractError("exponential_k closure needs k_corr_len");
    const double alpha = phi.k_mean - 1.0 / *phi.k_corr_len;
    return var * expm1_over(alpha, tstar);
  }
  case ClosureFamily::general_quadrature:
    return quadrature_integral(spec, phi, tstar);
  }
  return 0.0;
}

ClosureCoeffs coefficients_from_integral(const ClosureSpec& spec, const StatParams& phi,
                                         double u, double memory)
{
  const bool subtract = spec.sign_convention == SignConvention::main_text &&
                        (spec.family == ClosureFamily::white_noise_k ||
                         spec.family == ClosureFamily::exponential_k);
  const double correction = u * memory;
  ClosureCoeffs c;
  c.q1 = spec.v;
  c.q2 = subtract ? -phi.k_mean * u - correction : -phi.k_mean * u + correction;
  c.d22 = std::max(u * u * memory, 0.0);
  return c;
}

ClosureCoeffs closure_coefficients(const ClosureSpec& spec, const StatParams& phi,
                                   double x, double t, double u, double u_max)
{
  const double ts = t_star(u, x, t, phi.k_mean, u_max, spec.v);
  return coefficients_from_integral(spec, phi, u, memory_integral(spec, phi, ts));
}

} // namespace damd::mdist
