#include "isinglab/linalg.hpp"

#include <cmath>
#include <limits>

namespace isinglab {

Complex LogDeterminant::value() const {
  if (singular) return {};
  return phase * std::exp(log_abs);
}

LogDeterminant log_determinant(const ComplexMatrix& a) {
  LogDeterminant out;
  if (a.rows() != a.cols()) throw DomainError("determinant of a non-square matrix");
  if (a.rows() == 0) return out;

  const Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const auto& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const Complex u = packed(i, i);
    const double mag = std::abs(u);
    if (mag == 0.0) {
      out.singular = true;
      out.log_abs = -std::numeric_limits<double>::infinity();
      out.phase = 0.0;
      out.cond_estimate = std::numeric_limits<double>::infinity();
      return out;
    }
    out.log_abs += std::log(mag);
    out.phase *= u / mag;
  }
  out.phase *= static_cast<double>(lu.permutationP().determinant());
  const double rcond = lu.rcond();
  out.cond_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace isinglab
