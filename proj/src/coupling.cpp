#include "isinglab/coupling.hpp"

#include <cmath>
#include <sstream>

namespace isinglab {

CouplingK CouplingK::physical(double k) {
  if (!std::isfinite(k) || k < 0.0 || k >= 1.0) {
    std::ostringstream msg;
    msg << "physical coupling requires 0 <= k < 1, got " << k;
    throw DomainError(msg.str());
  }
  return CouplingK(Complex{k, 0.0}, CouplingMode::physical);
}

CouplingK CouplingK::analytic(Complex k) {
  if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) || std::abs(k) >= 1.0) {
    std::ostringstream msg;
    msg << "coupling requires |k| < 1, got " << k;
    throw DomainError(msg.str());
  }
  return CouplingK(k, CouplingMode::analytic);
}

CouplingK CouplingK::from_kappa(Complex kappa) {
  if (std::abs(kappa) >= 1.0) {
    std::ostringstream msg;
    msg << "kappa must satisfy |kappa| < 1, got " << kappa;
    throw DomainError(msg.str());
  }
  if (kappa.imag() == 0.0 && kappa.real() >= 0.0) {
    return physical(std::sqrt(kappa.real()));
  }
  return analytic(std::sqrt(kappa));
}

CouplingK CouplingK::conj() const {
  if (is_physical()) return *this;
  return analytic(std::conj(k_));
}

CouplingK k_from_temperature(double betaJ) {
  if (!(betaJ > 0.0) || !std::isfinite(betaJ)) {
    throw PhaseViolation("betaJ must be positive and finite");
  }
  const double s = std::sinh(2.0 * betaJ);
  const double k = 1.0 / (s * s);
  if (!(k < 1.0)) {
    std::ostringstream msg;
    msg << "betaJ = " << betaJ << " gives k = " << k << " >= 1 (not below T_c)";
    throw PhaseViolation(msg.str());
  }
  return CouplingK::physical(k);
}

Complex magnetization(const CouplingK& k) {
  if (k.is_zero()) return Complex{1.0, 0.0};
  const Complex base = 1.0 - k.kappa();
  if (k.is_physical()) return Complex{std::pow(base.real(), 0.125), 0.0};
  // Re(1 - k^2) > 0 is not guaranteed, but 1 - k^2 never crosses the cut
  // (-inf, 0] for |k| < 1, so the principal branch is continuous in the disc.
  return std::pow(base, 0.125);
}

}  // namespace isinglab
