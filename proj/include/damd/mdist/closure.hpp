#pragma once

#include <functional>
#include <optional>
#include <string>

namespace damd::mdist {

/// Coordinates of the statistical manifold: moments of the reaction rate and,
/// for the random-input case, of the initial and inflow states.
struct StatParams
{
  double k_mean = 1.0;
  double k_std = 0.0;
  std::optional<double> k_corr_len;
  std::optional<double> mu0, sigma0;
  std::optional<double> mub, sigmab;

  void validate() const;
  bool operator==(const StatParams&) const = default;
};

enum class ClosureFamily
{
  exact_deterministic_k,
  random_constant_k,
  white_noise_k,
  exponential_k,
  general_quadrature
};

/// Which printed form of the drift correction to use for the white-noise and
/// exponential closures. `appendix` adds the correction (+U*I), `main_text`
/// subtracts it (-U*I). The random-constant closure is identical under both.
enum class SignConvention
{
  appendix,
  main_text
};

std::string to_string(ClosureFamily f);
ClosureFamily closure_family_from_string(const std::string& s);
std::string to_string(SignConvention s);
SignConvention sign_convention_from_string(const std::string& s);

/// Covariance of k as a function of lag: a point mass at zero lag (`nugget`,
/// the white-noise part) plus a continuous part.
struct CovarianceModel
{
  double nugget = 0.0;
  std::function<double(double)> continuous;

  static CovarianceModel constant(double variance);
  static CovarianceModel white(double variance);
  static CovarianceModel exponential(double variance, double corr_len);
};

/// Covariance used by general_quadrature: the fixed `covariance` member
/// (custom) or one of the standard kernels built from phi at each call.
enum class QuadratureKernel
{
  custom,
  constant,
  white,
  exponential
};

std::string to_string(QuadratureKernel k);
QuadratureKernel quadrature_kernel_from_string(const std::string& s);

struct ClosureSpec
{
  ClosureFamily family = ClosureFamily::random_constant_k;
  SignConvention sign_convention = SignConvention::appendix;
  /// Only read by general_quadrature.
  QuadratureKernel kernel = QuadratureKernel::custom;
  CovarianceModel covariance;
  std::size_t quadrature_intervals = 4000;
  double v = 1.0;
};

/// Coefficients of F_t + q1 F_x + q2 F_U = (d22 F_U)_U at one point.
struct ClosureCoeffs
{
  double q1;
  double q2;
  double d22;
};

/// min{t, x/v, ln(u_max/U)/k_mean}. The logarithmic term is dropped when it is
/// undefined (U <= 0 or k_mean <= 0), so the U -> 0 limit is min(t, x/v).
double t_star(double u, double x, double t, double k_mean, double u_max, double v = 1.0);

/// Memory integral I(t*) = int_0^t* e^{<k> tau} C_k(v tau) d tau for the closure
/// family (closed form where one exists, trapezoid otherwise).
double memory_integral(const ClosureSpec& spec, const StatParams& phi, double tstar);

/// Drift and diffusion given the memory integral at the point.
ClosureCoeffs coefficients_from_integral(const ClosureSpec& spec, const StatParams& phi,
                                         double u, double memory);

ClosureCoeffs closure_coefficients(const ClosureSpec& spec, const StatParams& phi,
                                   double x, double t, double u, double u_max);

} // namespace damd::mdist
