#pragma once

#include <array>
#include <cmath>

#include "isinglab/coupling.hpp"

namespace isinglab {

/// Highest derivative order a Jet can carry.
inline constexpr int kMaxJetOrder = 15;

/// Truncated Taylor polynomial sum_{j<=order} c[j] h^j in an increment h of
/// kappa. Arithmetic truncates at the smaller operand order.
struct Jet {
  int order = 0;
  std::array<Complex, kMaxJetOrder + 1> c{};

  Jet() = default;
  explicit Jet(int ord, Complex value = {}) : order(ord) { c[0] = value; }

  /// kappa0 + h.
  static Jet variable(int ord, Complex at) {
    Jet j(ord, at);
    if (ord > 0) j.c[1] = 1.0;
    return j;
  }

  Complex value() const { return c[0]; }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= order; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator*=(Complex s) {
    for (int i = 0; i <= order; ++i) c[i] *= s;
    return *this;
  }
  Jet& operator*=(double s) {
    for (int i = 0; i <= order; ++i) c[i] *= s;
    return *this;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator*(Jet a, Complex s) { return a *= s; }
inline Jet operator*(Complex s, Jet a) { return a *= s; }
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r(std::min(a.order, b.order));
  for (int k = 0; k <= r.order; ++k) {
    Complex s{};
    for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
    r.c[k] = s;
  }
  return r;
}

inline Jet operator-(Complex s, const Jet& a) {
  Jet r(a.order);
  for (int i = 0; i <= a.order; ++i) r.c[i] = -a.c[i];
  r.c[0] += s;
  return r;
}

inline Jet reciprocal(const Jet& a) {
  Jet r(a.order);
  const Complex inv = 1.0 / a.c[0];
  r.c[0] = inv;
  for (int k = 1; k <= a.order; ++k) {
    Complex s{};
    for (int i = 1; i <= k; ++i) s += a.c[i] * r.c[k - i];
    r.c[k] = -s * inv;
  }
  return r;
}

/// (base + slope h)^p, principal branch at h = 0.
inline Jet linear_power(int ord, Complex base, Complex slope, double p) {
  Jet r(ord);
  r.c[0] = std::pow(base, p);
  const Complex q = slope / base;
  for (int k = 0; k < ord; ++k) r.c[k + 1] = r.c[k] * q * ((p - k) / (k + 1.0));
  return r;
}

/// z^e by repeated squaring; ipow(0, 0) == 1.
inline Complex ipow(Complex z, int e) {
  Complex r{1.0, 0.0};
  while (e > 0) {
    if (e & 1) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

/// (kappa0 + h)^e for a nonnegative integer e.
inline Jet integer_power(int ord, Complex kappa0, int e) {
  Jet r(ord);
  // binom(e, k) kappa0^{e-k}
  double binom = 1.0;
  for (int k = 0; k <= std::min(ord, e); ++k) {
    r.c[k] = binom * ipow(kappa0, e - k);
    binom = binom * (e - k) / (k + 1.0);
  }
  return r;
}

}  // namespace isinglab
