#pragma once

#include <string>
#include <vector>

#include "isinglab/coupling.hpp"
#include "isinglab/quadrature.hpp"

namespace isinglab {

enum class ChiRoute { fredholm, toeplitz_direct, integral };

const char* to_string(ChiRoute route);
ChiRoute parse_route(const std::string& text);

/// beta^{-1} chi_d, the diagonal susceptibility divided by beta.
struct ChiResult {
  Complex k{};
  Complex beta_inv_chi_d{};
  ChiRoute route = ChiRoute::fredholm;
  int terms_used = 1;
  double est_error = 0.0;
  /// A tail or series did not converge within its cap.
  bool flagged = false;
  std::string message;
};

struct ChiOptions {
  /// Largest separation summed by toeplitz_direct.
  int n_max_toeplitz = 64;
  /// Number of form-factor terms summed by the integral route.
  int n_max_integral = 2;
  QuadratureSpec spec = QuadratureSpec::gauss(64);
};

ChiResult chi_d(const CouplingK& k, double tol, ChiRoute route, const ChiOptions& options = {});

/// One row per grid point, in grid order. A failing point is reported as a
/// flagged row; the sweep itself never throws for per-point failures.
std::vector<ChiResult> sweep(const std::vector<CouplingK>& grid, ChiRoute route, double tol,
                             const ChiOptions& options = {});

}  // namespace isinglab
