#pragma once

#include <span>
#include <vector>

#include "isinglab/coupling.hpp"
#include "isinglab/quadrature.hpp"

namespace isinglab {

/// Two equivalent integrands for the n-th form-factor term: the squared
/// Cauchy determinant det(1/(1 - kappa x_i y_j))^2 (prefactor kappa^{2n}), or
/// its product form Delta(x)^2 Delta(y)^2 / prod (1 - kappa x_i y_j)^2
/// (prefactor kappa^{n(n+1)}).
enum class SnForm { cauchy, vandermonde };

const char* to_string(SnForm form);

struct SnResult {
  int n = 1;
  Complex kappa{};
  Complex value{};
  double rel_error_est = 0.0;
  double abs_error_est = 0.0;
  SnForm form = SnForm::vandermonde;
  QuadratureMethod method = QuadratureMethod::tensor_gauss;
  /// Error estimate above spec.target_rel_error.
  bool flagged = false;
};

struct STotalResult {
  Complex value{};
  std::vector<SnResult> terms;
  /// Estimate of |sum_{n > n_max} S_n| from the kappa^{n(n+1)} scaling.
  double tail_estimate = 0.0;
  bool tail_flag = false;
  double abs_error_est = 0.0;
};

struct LintResult {
  Complex value{};
  double abs_error_est = 0.0;
  /// Set when 1 - |kappa|^n < 1e-6.
  bool precision_warning = false;
};

struct DerivativeResult {
  Complex value{};
  double abs_error_est = 0.0;
  bool noise_warning = false;
};

/// Taylor data of S_n at kappa: derivatives[l] = d^l S_n / d kappa^l.
struct DerivativeSeries {
  Complex kappa{};
  int n = 1;
  std::vector<Complex> derivatives;
  std::vector<double> abs_error_est;
};

/// Lambda_1(x) = sqrt((1 - x)(1 - kappa x) / x), 0 < x < 1.
Complex lambda1(double x, Complex kappa);

/// Integrand of the Vandermonde form including prod Lambda_1(x_i)/Lambda_1(y_i),
/// without the constant kappa^{n(n+1)} / ((n!)^2 pi^{2n}).
Complex sn_integrand_vandermonde(std::span<const double> x, std::span<const double> y,
                                 Complex kappa);
/// Integrand of the Cauchy-determinant form, without kappa^{2n} / ((n!)^2 pi^{2n}).
Complex sn_integrand_cauchy(std::span<const double> x, std::span<const double> y, Complex kappa);

/// Constant in front of the integral for the given form.
Complex sn_prefactor(SnForm form, int n, Complex kappa);

SnResult s_n(Complex kappa, int n, const QuadratureSpec& spec,
             SnForm form = SnForm::vandermonde);

STotalResult s_total(Complex kappa, int n_max, const QuadratureSpec& spec);

/// The Vandermonde-form integral with the first factor raised to ell + 1:
///   int P / (1 - kappa^n P)^{ell+1} * Delta^2 Delta^2 / prod(1 - kappa x_i y_j)^2
///       * prod Lambda_1(x_i) / Lambda_1(y_i),   P = prod x_i y_i.
LintResult lint_integral(Complex kappa, int n, int ell, const QuadratureSpec& spec);

/// ell-th derivative of S_n by the Cauchy integral over |z - kappa| = radius,
/// sampled at `samples` equispaced points.
DerivativeResult d_ell_s_n(Complex kappa, int n, int ell, double radius,
                           const QuadratureSpec& spec, int samples = 0);

/// All derivatives of order 0..max_order by differentiating the integrand
/// in kappa (Taylor-mode arithmetic). Usable up to the unit circle.
DerivativeSeries s_n_derivatives(Complex kappa, int n, int max_order, const QuadratureSpec& spec);

}  // namespace isinglab
