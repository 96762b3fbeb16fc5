#pragma once

#include "isinglab/coupling.hpp"
#include "isinglab/series.hpp"

namespace isinglab {

/// Conditioning threshold above which a determinant is flagged unreliable.
inline constexpr double kUnreliableCondition = 1e12;

struct CorrelationResult {
  int N = 0;
  Complex value{1.0, 0.0};
  double cond_estimate = 1.0;
  bool reliable = true;
};

/// Immutable table of the Fourier coefficients phi_m, |m| < max_size,
/// shared by every Toeplitz matrix of order <= max_size.
class PhiTable {
 public:
  PhiTable(const CouplingK& k, int max_size);

  const CouplingK& coupling() const { return k_; }
  int max_size() const { return max_size_; }
  Complex operator()(int m) const { return coeffs_.at(m); }

 private:
  CouplingK k_;
  int max_size_;
  SeriesCoeffs coeffs_;
};

/// <sigma_{0,0} sigma_{N,N}> as det(phi_{m-n})_{1<=m,n<=N}.
CorrelationResult diagonal_correlation(const CouplingK& k, int N);
CorrelationResult diagonal_correlation(const PhiTable& table, int N);

/// <sigma_{0,0} sigma_{N,N}> - M^2.
Complex correlation_deviation(const CouplingK& k, int N);

}  // namespace isinglab
