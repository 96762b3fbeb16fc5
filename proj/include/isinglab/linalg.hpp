#pragma once

#include <Eigen/Dense>

#include "isinglab/coupling.hpp"

namespace isinglab {

using ComplexMatrix = Eigen::MatrixXcd;

/// Determinant kept as log|det| and a unit phase factor so large or tiny
/// determinants survive; cond_estimate is the reciprocal of LAPACK-style
/// rcond from the same factorization (infinity when singular).
struct LogDeterminant {
  double log_abs = 0.0;
  Complex phase{1.0, 0.0};
  double cond_estimate = 1.0;
  bool singular = false;

  Complex value() const;
};

LogDeterminant log_determinant(const ComplexMatrix& a);

}  // namespace isinglab
