#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "isinglab/coupling.hpp"

namespace isinglab {

enum class SeriesKind { binomial, phi_plus, phi_minus, phi_full, lambda, lambda_inv };

/// Truncated Laurent series sum_{d=min_degree}^{max_degree} coeffs[d - min_degree] x^d.
struct SeriesCoeffs {
  SeriesKind kind = SeriesKind::binomial;
  int min_degree = 0;
  std::vector<Complex> coeffs;
  /// Bound on the sup-norm (on |x| = 1) of the dropped tail.
  double truncation_error = 0.0;
  /// Set when truncation_error exceeds the target requested by the caller.
  bool exceeds_target = false;

  int max_degree() const { return min_degree + static_cast<int>(coeffs.size()) - 1; }
  bool has_degree(int d) const { return d >= min_degree && d <= max_degree(); }
  /// Coefficient at degree d; zero outside the stored range.
  Complex at(int d) const;
  /// Sum of the stored terms at a point.
  Complex evaluate(Complex x) const;
};

/// Default target for series tails.
inline constexpr double kSeriesTailTarget = 1e-16;

/// Smallest len with |k|^len / (1 - |k|) < target.
std::size_t truncation_length(double k_modulus, double target = kSeriesTailTarget);

enum class HalfExponent { plus_half, minus_half };

/// Taylor coefficients of (1 - k x)^{+-1/2} up to degree len - 1.
SeriesCoeffs binomial_half_series(HalfExponent exponent, Complex k, std::size_t len,
                                  double target = kSeriesTailTarget);

/// phi_plus(x) = (1 - k x)^{-1/2}, nonnegative degrees 0..len-1.
SeriesCoeffs phi_plus_series(const CouplingK& k, std::size_t len);
/// phi_minus(x) = (1 - k/x)^{1/2}, nonpositive degrees -(len-1)..0.
SeriesCoeffs phi_minus_series(const CouplingK& k, std::size_t len);

/// m-th Fourier coefficient of phi = phi_plus * phi_minus, where both factors
/// are truncated at len terms. len = 0 selects truncation_length(|k|).
Complex phi_m(const CouplingK& k, int m, std::size_t len = 0);

/// Fourier coefficients phi_m for |m| <= max_abs_degree, computed in one pass.
SeriesCoeffs phi_coefficients(const CouplingK& k, int max_abs_degree);

/// Laurent coefficients of Lambda = sqrt((1 - k x)(1 - k/x)) and of 1/Lambda
/// at degrees -(len-1)..(len-1).
std::pair<SeriesCoeffs, SeriesCoeffs> lambda_series(const CouplingK& k, std::size_t len);

/// Reference evaluation of the symbols on the unit circle (principal branches).
Complex phi_symbol(const CouplingK& k, Complex xi);
Complex lambda_symbol(const CouplingK& k, Complex xi);

}  // namespace isinglab
