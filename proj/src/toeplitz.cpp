#include "isinglab/toeplitz.hpp"

#include <algorithm>
#include <sstream>

#include "isinglab/linalg.hpp"

namespace isinglab {

PhiTable::PhiTable(const CouplingK& k, int max_size)
    : k_(k), max_size_(max_size), coeffs_(phi_coefficients(k, std::max(0, max_size - 1))) {
  if (max_size < 0) throw DomainError("Toeplitz order must be nonnegative");
}

CorrelationResult diagonal_correlation(const PhiTable& table, int N) {
  if (N < 0) throw DomainError("diagonal separation must be nonnegative");
  if (N > table.max_size()) {
    std::ostringstream msg;
    msg << "phi table covers orders up to " << table.max_size() << ", requested " << N;
    throw DomainError(msg.str());
  }
  CorrelationResult out;
  out.N = N;
  if (N == 0) return out;
  if (table.coupling().is_zero()) return out;

  ComplexMatrix t(N, N);
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n) t(m, n) = table(m - n);
  const auto det = log_determinant(t);
  out.value = det.value();
  if (table.coupling().is_physical()) out.value.imag(0.0);
  out.cond_estimate = det.cond_estimate;
  out.reliable = !det.singular && det.cond_estimate <= kUnreliableCondition;
  return out;
}

CorrelationResult diagonal_correlation(const CouplingK& k, int N) {
  return diagonal_correlation(PhiTable(k, std::max(N, 0)), N);
}

Complex correlation_deviation(const CouplingK& k, int N) {
  const Complex m = magnetization(k);
  return diagonal_correlation(k, N).value - m * m;
}

}  // namespace isinglab
