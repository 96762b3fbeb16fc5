#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace isinglab {

using Complex = std::complex<double>;

/// Input outside the domain of an operation (|k| >= 1, x outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// betaJ on the high-temperature side of the transition (k >= 1).
class PhaseViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative procedure could not meet its tolerance within its caps.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value, double gap)
      : std::runtime_error(what), best_value_(best_value), gap_(gap) {}
  double best_value() const { return best_value_; }
  double gap() const { return gap_; }

 private:
  double best_value_;
  double gap_;
};

enum class CouplingMode { physical, analytic };

/// Low-temperature coupling k = sinh(2 beta J)^-2 and kappa = k^2.
///
/// Physical mode holds a real k in [0, 1); analytic mode accepts any complex
/// k strictly inside the unit disc.
class CouplingK {
 public:
  static CouplingK physical(double k);
  static CouplingK analytic(Complex k);
  /// Principal square root of kappa; kappa must lie in the open unit disc.
  static CouplingK from_kappa(Complex kappa);

  Complex k() const { return k_; }
  Complex kappa() const { return kappa_; }
  CouplingMode mode() const { return mode_; }
  bool is_physical() const { return mode_ == CouplingMode::physical; }
  bool is_zero() const { return k_ == Complex{0.0, 0.0}; }
  double modulus() const { return std::abs(k_); }
  CouplingK conj() const;

 private:
  CouplingK(Complex k, CouplingMode mode) : k_(k), kappa_(k * k), mode_(mode) {}

  Complex k_;
  Complex kappa_;
  CouplingMode mode_;
};

CouplingK k_from_temperature(double betaJ);

/// Spontaneous magnetization (1 - k^2)^{1/8}, principal branch.
Complex magnetization(const CouplingK& k);

}  // namespace isinglab
