#include "isinglab/form_factor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "isinglab/jet.hpp"
#include "isinglab/parallel.hpp"

namespace isinglab {

namespace {

using std::numbers::pi;

void check_kappa(Complex kappa) {
  if (!(std::abs(kappa) < 1.0)) {
    std::ostringstream msg;
    msg << "kappa must satisfy |kappa| < 1, got " << kappa;
    throw DomainError(msg.str());
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double norm_constant(int n) {
  const double nf = factorial(n);
  return 1.0 / (nf * nf * std::pow(pi, 2 * n));
}

void check_unit_interval(std::span<const double> v) {
  for (double t : v)
    if (!(t > 0.0 && t < 1.0)) throw DomainError("integrand coordinates must lie in (0, 1)");
}

Complex squared_vandermonde(std::span<const double> v) {
  double d = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) d *= (v[j] - v[i]) * (v[j] - v[i]);
  return d;
}

// ---------------------------------------------------------------------------
// Per-node factor tables. T is Complex for values and Jet for derivatives.

struct ValueOps {
  using T = Complex;
  Complex kappa;
  Complex kappa_n;
  int power;  // ell + 1

  T sqrt_factor(double x) const { return std::sqrt(1.0 - kappa * x); }
  T inv_sqrt_factor(double y) const { return 1.0 / std::sqrt(1.0 - kappa * y); }
  T inv_square(double u) const {
    const Complex d = 1.0 - kappa * u;
    return 1.0 / (d * d);
  }
  T first(double p) const { return p / ipow(1.0 - kappa_n * p, power); }
  T zero() const { return {}; }
};

struct JetOps {
  using T = Jet;
  Complex kappa;
  int order;
  Jet kappa_n;

  T sqrt_factor(double x) const { return linear_power(order, 1.0 - kappa * x, -x, 0.5); }
  T inv_sqrt_factor(double y) const { return linear_power(order, 1.0 - kappa * y, -y, -0.5); }
  T inv_square(double u) const { return linear_power(order, 1.0 - kappa * u, -u, -2.0); }
  T first(double p) const { return reciprocal(Complex{1.0, 0.0} - kappa_n * p) * p; }
  T zero() const { return Jet(order); }
};

template <class Ops>
struct NodeTable {
  using T = typename Ops::T;
  std::vector<double> x;
  std::vector<T> sx;  // weight_x * sqrt(1 - kappa x)
  std::vector<T> sy;  // weight_y / sqrt(1 - kappa y)
  std::vector<T> q;   // (1 - kappa x_a x_c)^-2, row-major
  std::size_t m = 0;

  NodeTable(const EndpointRule& rule, const Ops& ops) : x(rule.x), m(rule.size()) {
    sx.reserve(m);
    sy.reserve(m);
    for (std::size_t a = 0; a < m; ++a) {
      sx.push_back(ops.sqrt_factor(x[a]) * rule.weight_x[a]);
      sy.push_back(ops.inv_sqrt_factor(x[a]) * rule.weight_y[a]);
    }
    q.reserve(m * m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t c = 0; c < m; ++c) q.push_back(ops.inv_square(x[a] * x[c]));
  }
  const T& Q(std::size_t a, std::size_t c) const { return q[a * m + c]; }
};

template <class T>
T ordered_sum(const std::vector<T>& parts, T acc) {
  for (const auto& p : parts) acc += p;
  return acc;
}

// Vandermonde form, n = 1: sum_a sum_c sx_a sy_c q_ac first(x_a y_c).
template <class Ops>
typename Ops::T tensor_n1(const EndpointRule& rule, const Ops& ops) {
  using T = typename Ops::T;
  const NodeTable<Ops> tab(rule, ops);
  std::vector<T> rows(tab.m, ops.zero());
  parallel_for(tab.m, [&](std::size_t a) {
    T acc = ops.zero();
    for (std::size_t c = 0; c < tab.m; ++c)
      acc += tab.sy[c] * tab.Q(a, c) * ops.first(tab.x[a] * tab.x[c]);
    rows[a] = tab.sx[a] * acc;
  });
  return ordered_sum(rows, ops.zero());
}

// Vandermonde form, n = 2. The integrand is symmetric under x1 <-> x2 and
// y1 <-> y2 and vanishes on the diagonals, so only a < b, c < d is summed.
template <class Ops>
typename Ops::T tensor_n2(const EndpointRule& rule, const Ops& ops) {
  using T = typename Ops::T;
  const NodeTable<Ops> tab(rule, ops);
  const std::size_t m = tab.m;
  // sy_c sy_d (y_c - y_d)^2 for c < d, packed by row.
  std::vector<T> ypair;
  std::vector<std::size_t> yrow(m + 1, 0);
  for (std::size_t c = 0; c < m; ++c) {
    yrow[c] = ypair.size();
    for (std::size_t d = c + 1; d < m; ++d) {
      const double dy = tab.x[c] - tab.x[d];
      ypair.push_back(tab.sy[c] * tab.sy[d] * (dy * dy));
    }
  }
  yrow[m] = ypair.size();

  std::vector<T> rows(m, ops.zero());
  parallel_for(m, [&](std::size_t a) {
    T row = ops.zero();
    std::vector<T> qq(m, ops.zero());
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = 0; c < m; ++c) qq[c] = tab.Q(a, c) * tab.Q(b, c);
      const double xab = tab.x[a] * tab.x[b];
      T inner = ops.zero();
      for (std::size_t c = 0; c < m; ++c) {
        const double xyc = xab * tab.x[c];
        std::size_t idx = yrow[c];
        for (std::size_t d = c + 1; d < m; ++d, ++idx)
          inner += qq[c] * qq[d] * ypair[idx] * ops.first(xyc * tab.x[d]);
      }
      const double dx = tab.x[a] - tab.x[b];
      row += tab.sx[a] * tab.sx[b] * inner * (dx * dx);
    }
    rows[a] = row * 4.0;
  });
  return ordered_sum(rows, ops.zero());
}

// Cauchy-determinant form, n = 2, values only.
Complex tensor_n2_cauchy(const EndpointRule& rule, Complex kappa) {
  const std::size_t m = rule.size();
  const auto& x = rule.x;
  std::vector<Complex> sx(m), sy(m), r(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    sx[a] = rule.weight_x[a] * std::sqrt(1.0 - kappa * x[a]);
    sy[a] = rule.weight_y[a] / std::sqrt(1.0 - kappa * x[a]);
    for (std::size_t c = 0; c < m; ++c) r[a * m + c] = 1.0 / (1.0 - kappa * x[a] * x[c]);
  }
  const Complex k2 = kappa * kappa;
  std::vector<Complex> rows(m);
  parallel_for(m, [&](std::size_t a) {
    Complex row{};
    for (std::size_t b = a + 1; b < m; ++b) {
      Complex inner{};
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = c + 1; d < m; ++d) {
          const Complex det = r[a * m + c] * r[b * m + d] - r[a * m + d] * r[b * m + c];
          const double p = x[a] * x[b] * x[c] * x[d];
          inner += sy[c] * sy[d] * det * det * (p / (1.0 - k2 * p));
        }
      row += sx[a] * sx[b] * inner;
    }
    rows[a] = 4.0 * row;
  });
  return ordered_sum(rows, Complex{});
}

// ---------------------------------------------------------------------------
// Monte Carlo for arbitrary n.

constexpr std::uint64_t kBlock = 4096;

struct Sample {
  std::vector<double> x, y;
};

Sample draw(std::uint64_t seed, std::uint64_t index, int n) {
  Sample s{std::vector<double>(static_cast<std::size_t>(n)),
           std::vector<double>(static_cast<std::size_t>(n))};
  const std::uint64_t slots_per_attempt = 10u * static_cast<std::uint64_t>(n);
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t base = attempt * slots_per_attempt;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::uint64_t>(i);
      const double xi = sample_beta_x(seed, index, base + 10 * ui);
      const double yi = sample_beta_y(seed, index, base + 10 * ui + 5);
      ok = ok && xi > 0.0 && xi < 1.0 && yi > 0.0 && yi < 1.0;
      s.x[static_cast<std::size_t>(i)] = xi;
      s.y[static_cast<std::size_t>(i)] = yi;
    }
    if (ok) return s;
  }
}

// Integrand divided by the sampling density, up to the constant (pi/2)^{2n}.
template <class Ops>
typename Ops::T mc_ratio(const Sample& s, const Ops& ops, SnForm form, Complex kappa, int n) {
  using T = typename Ops::T;
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= s.x[static_cast<std::size_t>(i)] * s.y[static_cast<std::size_t>(i)];
  T acc = ops.first(p);
  for (int i = 0; i < n; ++i) {
    acc = acc * ops.sqrt_factor(s.x[static_cast<std::size_t>(i)]);
    acc = acc * ops.inv_sqrt_factor(s.y[static_cast<std::size_t>(i)]);
  }
  if (form == SnForm::vandermonde) {
    acc = acc * (squared_vandermonde(s.x) * squared_vandermonde(s.y));
    for (double xi : s.x)
      for (double yj : s.y) acc = acc * ops.inv_square(xi * yj);
    return acc;
  }
  if constexpr (std::is_same_v<T, Complex>) {
    Eigen::MatrixXcd c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c(i, j) = 1.0 / (1.0 - kappa * s.x[static_cast<std::size_t>(i)] * s.y[static_cast<std::size_t>(j)]);
    const Complex det = c.determinant();
    return acc * det * det;
  } else {
    throw DomainError("Taylor derivatives use the Vandermonde form");
  }
}

double abs2(Complex z) { return std::norm(z); }

// Returns (mean per coefficient, standard error per coefficient).
template <class Ops>
std::pair<std::vector<Complex>, std::vector<double>> monte_carlo(const QuadratureSpec& spec,
                                                                  const Ops& ops, SnForm form,
                                                                  Complex kappa, int n,
                                                                  int coeffs) {
  using T = typename Ops::T;
  const std::uint64_t total = spec.mc_samples;
  const std::uint64_t blocks = (total + kBlock - 1) / kBlock;
  const auto nc = static_cast<std::size_t>(coeffs);
  std::vector<std::vector<Complex>> sums(blocks, std::vector<Complex>(nc));
  std::vector<std::vector<double>> sq(blocks, std::vector<double>(nc));
  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t lo = b * kBlock, hi = std::min(total, lo + kBlock);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const T v = mc_ratio(draw(spec.seed, i, n), ops, form, kappa, n);
      for (std::size_t j = 0; j < nc; ++j) {
        Complex cj;
        if constexpr (std::is_same_v<T, Complex>) cj = v;
        else cj = v.c[j];
        sums[b][j] += cj;
        sq[b][j] += abs2(cj);
      }
    }
  });
  std::vector<Complex> mean(nc);
  std::vector<double> se(nc);
  const double N = static_cast<double>(total);
  for (std::size_t j = 0; j < nc; ++j) {
    Complex s{};
    double s2 = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      s += sums[b][j];
      s2 += sq[b][j];
    }
    const Complex mu = s / N;
    const double var = std::max(0.0, s2 / N - abs2(mu)) * N / (N - 1.0);
    const double scale = std::pow(0.5 * pi, 2 * n);
    mean[j] = mu * scale;
    se[j] = std::sqrt(var / N) * scale;
  }
  return {mean, se};
}

Complex tensor_value(const EndpointRule& rule, Complex kappa, int n, int ell, SnForm form) {
  if (form == SnForm::cauchy && n == 2) {
    if (ell != 0) throw DomainError("the Cauchy form is evaluated only at ell = 0");
    return tensor_n2_cauchy(rule, kappa);
  }
  const ValueOps ops{kappa, ipow(kappa, n), ell + 1};
  return n == 1 ? tensor_n1(rule, ops) : tensor_n2(rule, ops);
}

// Integral without prefactor plus an absolute error estimate.
std::pair<Complex, double> integral_value(Complex kappa, int n, int ell, SnForm form,
                                          const QuadratureSpec& spec) {
  if (spec.method == QuadratureMethod::tensor_gauss) {
    const Complex fine = tensor_value(endpoint_rule(spec), kappa, n, ell, form);
    const Complex coarse = tensor_value(coarse_endpoint_rule(spec), kappa, n, ell, form);
    return {fine, std::abs(fine - coarse)};
  }
  if (form == SnForm::cauchy && ell != 0)
    throw DomainError("the Cauchy form is evaluated only at ell = 0");
  const ValueOps ops{kappa, ipow(kappa, n), ell + 1};
  auto [mean, se] = monte_carlo(spec, ops, form, kappa, n, 1);
  return {mean[0], se[0]};
}

}  // namespace

const char* to_string(SnForm form) { return form == SnForm::cauchy ? "Sn1" : "Sn2"; }

Complex lambda1(double x, Complex kappa) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("lambda1 requires 0 < x < 1");
  check_kappa(kappa);
  // Re(1 - kappa x) > 0 here, so the product of principal roots is the
  // principal root of the product.
  return std::sqrt((1.0 - x) / x) * std::sqrt(1.0 - kappa * x);
}

Complex sn_integrand_vandermonde(std::span<const double> x, std::span<const double> y,
                                 Complex kappa) {
  if (x.size() != y.size() || x.empty()) throw DomainError("x and y must have equal positive length");
  check_unit_interval(x);
  check_unit_interval(y);
  check_kappa(kappa);
  const int n = static_cast<int>(x.size());
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) p *= x[i] * y[i];
  Complex v = p / (1.0 - ipow(kappa, n) * p);
  v *= squared_vandermonde(x) * squared_vandermonde(y);
  for (double xi : x)
    for (double yj : y) {
      const Complex d = 1.0 - kappa * xi * yj;
      v /= d * d;
    }
  for (std::size_t i = 0; i < x.size(); ++i) v *= lambda1(x[i], kappa) / lambda1(y[i], kappa);
  return v;
}

Complex sn_integrand_cauchy(std::span<const double> x, std::span<const double> y, Complex kappa) {
  if (x.size() != y.size() || x.empty()) throw DomainError("x and y must have equal positive length");
  check_unit_interval(x);
  check_unit_interval(y);
  check_kappa(kappa);
  const auto n = static_cast<Eigen::Index>(x.size());
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) p *= x[i] * y[i];
  Eigen::MatrixXcd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      c(i, j) = 1.0 / (1.0 - kappa * x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)]);
  const Complex det = c.determinant();
  Complex v = p / (1.0 - ipow(kappa, static_cast<int>(n)) * p) * det * det;
  for (std::size_t i = 0; i < x.size(); ++i) v *= lambda1(x[i], kappa) / lambda1(y[i], kappa);
  return v;
}

Complex sn_prefactor(SnForm form, int n, Complex kappa) {
  const int power = form == SnForm::cauchy ? 2 * n : n * (n + 1);
  return ipow(kappa, power) * norm_constant(n);
}

SnResult s_n(Complex kappa, int n, const QuadratureSpec& spec, SnForm form) {
  check_kappa(kappa);
  spec.validate(n);
  SnResult out;
  out.n = n;
  out.kappa = kappa;
  out.form = form;
  out.method = spec.method;
  if (kappa == Complex{}) return out;

  const auto [integral, err] = integral_value(kappa, n, 0, form, spec);
  const Complex pre = sn_prefactor(form, n, kappa);
  out.value = pre * integral;
  out.abs_error_est = std::abs(pre) * err;
  out.rel_error_est = std::abs(out.value) > 0.0 ? out.abs_error_est / std::abs(out.value) : 0.0;
  out.flagged = out.rel_error_est > spec.target_rel_error;
  return out;
}

STotalResult s_total(Complex kappa, int n_max, const QuadratureSpec& spec) {
  check_kappa(kappa);
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  STotalResult out;
  if (kappa == Complex{}) return out;
  for (int n = 1; n <= n_max; ++n) {
    QuadratureSpec term_spec = spec;
    if (n > 2) term_spec.method = QuadratureMethod::monte_carlo;
    auto term = s_n(kappa, n, term_spec);
    out.value += term.value;
    out.abs_error_est += term.abs_error_est;
    out.terms.push_back(term);
  }
  // S_{n+1} / S_n scales like kappa^{2n+2} / (n+1)^2 from the prefactors.
  const double r = std::abs(kappa);
  const double last = std::abs(out.terms.back().value);
  const double ratio = std::pow(r, 2 * n_max + 2) / ((n_max + 1.0) * (n_max + 1.0));
  out.tail_estimate = ratio < 1.0 ? last * ratio / (1.0 - ratio) : last;
  out.tail_flag = out.tail_estimate > spec.target_rel_error * std::max(std::abs(out.value), 1e-300);
  return out;
}

LintResult lint_integral(Complex kappa, int n, int ell, const QuadratureSpec& spec) {
  check_kappa(kappa);
  spec.validate(n);
  if (ell < 0) throw DomainError("ell must be nonnegative");
  LintResult out;
  const auto [v, err] = integral_value(kappa, n, ell, SnForm::vandermonde, spec);
  out.value = v;
  out.abs_error_est = err;
  out.precision_warning = 1.0 - std::pow(std::abs(kappa), n) < 1e-6;
  return out;
}

DerivativeResult d_ell_s_n(Complex kappa, int n, int ell, double radius, const QuadratureSpec& spec,
                           int samples) {
  check_kappa(kappa);
  if (ell < 0) throw DomainError("derivative order must be nonnegative");
  if (!(radius > 0.0)) throw DomainError("contour radius must be positive");
  if (!(std::abs(kappa) + radius < 1.0)) {
    std::ostringstream msg;
    msg << "contour |z - " << kappa << "| = " << radius << " leaves the unit disc";
    throw DomainError(msg.str());
  }
  if (samples <= 0) samples = std::max(32, 2 * ell + 16);
  const auto count = static_cast<std::size_t>(samples);
  std::vector<Complex> terms(count);
  std::vector<double> errs(count);
  parallel_for(count, [&](std::size_t j) {
    const double theta = 2.0 * pi * static_cast<double>(j) / samples;
    const Complex w = std::polar(1.0, theta);
    const auto s = s_n(kappa + radius * w, n, spec);
    terms[j] = s.value * std::polar(1.0, -ell * theta);
    errs[j] = s.abs_error_est;
  });
  Complex sum{};
  double err = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    sum += terms[j];
    err = std::max(err, errs[j]);
  }
  const double scale = factorial(ell) / std::pow(radius, ell);
  DerivativeResult out;
  out.value = sum / static_cast<double>(samples) * scale;
  out.abs_error_est = err * scale;
  out.noise_warning = out.abs_error_est > 1e-6 * std::max(std::abs(out.value), 1e-300);
  return out;
}

DerivativeSeries s_n_derivatives(Complex kappa, int n, int max_order, const QuadratureSpec& spec) {
  check_kappa(kappa);
  spec.validate(n);
  if (max_order < 0 || max_order > kMaxJetOrder) {
    std::ostringstream msg;
    msg << "derivative order must lie in [0, " << kMaxJetOrder << "]";
    throw DomainError(msg.str());
  }
  DerivativeSeries out;
  out.kappa = kappa;
  out.n = n;
  const auto len = static_cast<std::size_t>(max_order + 1);
  out.derivatives.assign(len, Complex{});
  out.abs_error_est.assign(len, 0.0);

  const JetOps ops{kappa, max_order, integer_power(max_order, kappa, n)};
  Jet integral(max_order);
  std::vector<double> error(len, 0.0);
  if (spec.method == QuadratureMethod::tensor_gauss) {
    auto eval = [&](const EndpointRule& rule) {
      return n == 1 ? tensor_n1(rule, ops) : tensor_n2(rule, ops);
    };
    integral = eval(endpoint_rule(spec));
    const Jet coarse = eval(coarse_endpoint_rule(spec));
    for (int j = 0; j <= max_order; ++j) error[static_cast<std::size_t>(j)] = std::abs(integral.c[j] - coarse.c[j]);
  } else {
    auto [mean, se] = monte_carlo(spec, ops, SnForm::vandermonde, kappa, n, max_order + 1);
    for (int j = 0; j <= max_order; ++j) {
      integral.c[j] = mean[static_cast<std::size_t>(j)];
      error[static_cast<std::size_t>(j)] = se[static_cast<std::size_t>(j)];
    }
  }
  // S_n = c kappa^{n(n+1)} I(kappa); multiply the Taylor polynomials.
  const Jet pre = integer_power(max_order, kappa, n * (n + 1)) * norm_constant(n);
  const Jet s = pre * integral;
  double fact = 1.0;
  for (int j = 0; j <= max_order; ++j) {
    if (j > 0) fact *= j;
    out.derivatives[static_cast<std::size_t>(j)] = s.c[j] * fact;
    double e = 0.0;
    for (int i = 0; i <= j; ++i) e += std::abs(pre.c[j - i]) * error[static_cast<std::size_t>(i)];
    out.abs_error_est[static_cast<std::size_t>(j)] = e * fact;
  }
  return out;
}

}  // namespace isinglab
