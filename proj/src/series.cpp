#include "isinglab/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isinglab {

Complex SeriesCoeffs::at(int d) const {
  if (!has_degree(d)) return {};
  return coeffs[static_cast<std::size_t>(d - min_degree)];
}

Complex SeriesCoeffs::evaluate(Complex x) const {
  // Horner on the nonnegative part and on the negative part in 1/x.
  Complex pos{};
  for (int d = max_degree(); d >= std::max(0, min_degree); --d) pos = pos * x + at(d);
  Complex neg{};
  if (min_degree < 0) {
    const Complex inv = 1.0 / x;
    for (int d = min_degree; d <= std::min(-1, max_degree()); ++d) neg = (neg + at(d)) * inv;
  }
  return pos + neg;
}

std::size_t truncation_length(double k_modulus, double target) {
  if (k_modulus == 0.0) return 1;
  if (k_modulus >= 1.0) throw DomainError("truncation_length requires |k| < 1");
  const double len = std::log(target * (1.0 - k_modulus)) / std::log(k_modulus);
  return static_cast<std::size_t>(std::max(1.0, std::floor(len) + 1.0));
}

SeriesCoeffs binomial_half_series(HalfExponent exponent, Complex k, std::size_t len,
                                  double target) {
  if (len == 0) throw DomainError("series length must be positive");
  const double modulus = std::abs(k);
  if (modulus >= 1.0) throw DomainError("binomial series requires |k| < 1");
  const double e = exponent == HalfExponent::plus_half ? 0.5 : -0.5;

  SeriesCoeffs out;
  out.kind = SeriesKind::binomial;
  out.coeffs.resize(len);
  out.coeffs[0] = 1.0;
  for (std::size_t m = 0; m + 1 < len; ++m) {
    const double md = static_cast<double>(m);
    out.coeffs[m + 1] = out.coeffs[m] * k * ((md - e) / (md + 1.0));
  }
  // |binom(+-1/2, m)| <= 1, so the tail is dominated by a geometric series.
  out.truncation_error =
      modulus == 0.0 ? 0.0 : std::pow(modulus, static_cast<double>(len)) / (1.0 - modulus);
  out.exceeds_target = out.truncation_error > target;
  return out;
}

SeriesCoeffs phi_plus_series(const CouplingK& k, std::size_t len) {
  auto s = binomial_half_series(HalfExponent::minus_half, k.k(), len);
  s.kind = SeriesKind::phi_plus;
  return s;
}

SeriesCoeffs phi_minus_series(const CouplingK& k, std::size_t len) {
  auto s = binomial_half_series(HalfExponent::plus_half, k.k(), len);
  std::reverse(s.coeffs.begin(), s.coeffs.end());
  s.min_degree = -static_cast<int>(len - 1);
  s.kind = SeriesKind::phi_minus;
  return s;
}

namespace {

// sum_{j>=0} a[j + shift] * b[j], both truncated at their stored length.
Complex shifted_dot(const std::vector<Complex>& a, const std::vector<Complex>& b,
                    std::size_t shift) {
  Complex acc{};
  if (shift >= a.size()) return acc;
  const std::size_t n = std::min(a.size() - shift, b.size());
  // Summed from the small tail upward.
  for (std::size_t j = n; j-- > 0;) acc += a[j + shift] * b[j];
  return acc;
}

bool real_coupling(const CouplingK& k) { return k.k().imag() == 0.0; }

Complex clean(Complex z, bool real) { return real ? Complex{z.real(), 0.0} : z; }

}  // namespace

Complex phi_m(const CouplingK& k, int m, std::size_t len) {
  if (k.is_zero()) return m == 0 ? Complex{1.0, 0.0} : Complex{};
  if (len == 0) len = truncation_length(k.modulus());
  const auto plus = binomial_half_series(HalfExponent::minus_half, k.k(), len);
  const auto minus = binomial_half_series(HalfExponent::plus_half, k.k(), len);
  // phi_plus has coefficient b_p at x^p, phi_minus has a_q at x^-q.
  const Complex v = m >= 0 ? shifted_dot(plus.coeffs, minus.coeffs, static_cast<std::size_t>(m))
                           : shifted_dot(minus.coeffs, plus.coeffs, static_cast<std::size_t>(-m));
  return clean(v, real_coupling(k));
}

SeriesCoeffs phi_coefficients(const CouplingK& k, int max_abs_degree) {
  if (max_abs_degree < 0) throw DomainError("max_abs_degree must be nonnegative");
  SeriesCoeffs out;
  out.kind = SeriesKind::phi_full;
  out.min_degree = -max_abs_degree;
  out.coeffs.assign(static_cast<std::size_t>(2 * max_abs_degree + 1), Complex{});
  if (k.is_zero()) {
    out.coeffs[static_cast<std::size_t>(max_abs_degree)] = 1.0;
    return out;
  }
  const std::size_t len = truncation_length(k.modulus()) + static_cast<std::size_t>(max_abs_degree);
  const auto plus = binomial_half_series(HalfExponent::minus_half, k.k(), len);
  const auto minus = binomial_half_series(HalfExponent::plus_half, k.k(), len);
  const bool real = real_coupling(k);
  for (int m = -max_abs_degree; m <= max_abs_degree; ++m) {
    const Complex v = m >= 0
                          ? shifted_dot(plus.coeffs, minus.coeffs, static_cast<std::size_t>(m))
                          : shifted_dot(minus.coeffs, plus.coeffs, static_cast<std::size_t>(-m));
    out.coeffs[static_cast<std::size_t>(m + max_abs_degree)] = clean(v, real);
  }
  const double r = k.modulus();
  out.truncation_error = 2.0 * std::pow(r, static_cast<double>(len)) / ((1.0 - r) * (1.0 - r));
  return out;
}

std::pair<SeriesCoeffs, SeriesCoeffs> lambda_series(const CouplingK& k, std::size_t len) {
  if (len == 0) throw DomainError("series length must be positive");
  const int top = static_cast<int>(len) - 1;
  SeriesCoeffs lam, lam_inv;
  lam.kind = SeriesKind::lambda;
  lam_inv.kind = SeriesKind::lambda_inv;
  lam.min_degree = lam_inv.min_degree = -top;
  lam.coeffs.assign(2 * len - 1, Complex{});
  lam_inv.coeffs.assign(2 * len - 1, Complex{});
  if (k.is_zero()) {
    lam.coeffs[len - 1] = lam_inv.coeffs[len - 1] = 1.0;
    return {lam, lam_inv};
  }

  // Lambda = (1 - k x)^{1/2} (1 - k/x)^{1/2}: degree m picks sum_j a_{j+m} a_j.
  const std::size_t inner = truncation_length(k.modulus()) + len;
  const auto a = binomial_half_series(HalfExponent::plus_half, k.k(), inner);
  const auto b = binomial_half_series(HalfExponent::minus_half, k.k(), inner);
  const bool real = real_coupling(k);
  for (int m = 0; m <= top; ++m) {
    const Complex lm = clean(shifted_dot(a.coeffs, a.coeffs, static_cast<std::size_t>(m)), real);
    const Complex im = clean(shifted_dot(b.coeffs, b.coeffs, static_cast<std::size_t>(m)), real);
    lam.coeffs[static_cast<std::size_t>(top + m)] = lam.coeffs[static_cast<std::size_t>(top - m)] = lm;
    lam_inv.coeffs[static_cast<std::size_t>(top + m)] =
        lam_inv.coeffs[static_cast<std::size_t>(top - m)] = im;
  }
  // |coeff(m)| <= |k|^|m| / (1 - |k|^2); two-sided tail beyond |m| = top.
  const double r = k.modulus();
  const double tail = 2.0 * std::pow(r, static_cast<double>(len)) / ((1.0 - r) * (1.0 - r * r));
  lam.truncation_error = lam_inv.truncation_error = tail;
  return {lam, lam_inv};
}

Complex phi_symbol(const CouplingK& k, Complex xi) {
  return std::sqrt(1.0 - k.k() / xi) / std::sqrt(1.0 - k.k() * xi);
}

Complex lambda_symbol(const CouplingK& k, Complex xi) {
  return std::sqrt(1.0 - k.k() * xi) * std::sqrt(1.0 - k.k() / xi);
}

}  // namespace isinglab
