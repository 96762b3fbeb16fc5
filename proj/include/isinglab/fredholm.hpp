#pragma once

#include "isinglab/coupling.hpp"
#include "isinglab/linalg.hpp"
#include "isinglab/series.hpp"

namespace isinglab {

/// Hard cap on the truncation dimension of the Hankel operators.
inline constexpr int kMaxHankelCutoff = 4096;

/// Truncation of H_N(psi): cutoff x cutoff with (i, j) entry psi_{N+i+j+1}.
struct HankelTruncation {
  int N = 1;
  int cutoff = 1;
  ComplexMatrix entries;
  /// Bound on sum |psi_d| over the degrees the truncation leaves out.
  double tail_bound = 0.0;
};

struct FredholmResult {
  int N = 1;
  Complex det_value{1.0, 0.0};
  int cutoff_used = 1;
  double est_error = 0.0;
};

struct SResult {
  Complex value{};
  int terms_used = 0;
  double est_error = 0.0;
};

/// Builds H_N from the positive-degree side of a Laurent series. Throws
/// DomainError naming the required length when the series is too short.
HankelTruncation hankel_matrix(const SeriesCoeffs& coeffs, int N, int cutoff);

/// det(I - H_N(Lambda) H_N(1/Lambda)) with the cutoff doubled until two
/// consecutive values differ by less than tol.
FredholmResult fredholm_det(const CouplingK& k, int N, double tol);

/// sum_{N>=1} [det(I - K_N) - 1].
SResult s_via_fredholm_detailed(const CouplingK& k, double tol);
Complex s_via_fredholm(const CouplingK& k, double tol);

}  // namespace isinglab
