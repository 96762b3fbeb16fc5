#include "isinglab/chi.hpp"

#include <algorithm>
#include <cmath>

#include "isinglab/form_factor.hpp"
#include "isinglab/fredholm.hpp"
#include "isinglab/parallel.hpp"
#include "isinglab/toeplitz.hpp"

namespace isinglab {

const char* to_string(ChiRoute route) {
  switch (route) {
    case ChiRoute::fredholm:
      return "fredholm";
    case ChiRoute::toeplitz_direct:
      return "toeplitz_direct";
    case ChiRoute::integral:
      return "integral";
  }
  return "?";
}

ChiRoute parse_route(const std::string& text) {
  if (text == "fredholm") return ChiRoute::fredholm;
  if (text == "toeplitz_direct" || text == "toeplitz") return ChiRoute::toeplitz_direct;
  if (text == "integral") return ChiRoute::integral;
  throw DomainError("unknown route '" + text + "' (fredholm, toeplitz_direct, integral)");
}

namespace {

ChiResult from_s(const CouplingK& k, ChiRoute route, Complex s, int terms, double s_error) {
  const Complex m = magnetization(k);
  const Complex m2 = m * m;
  ChiResult out;
  out.k = k.k();
  out.route = route;
  out.terms_used = std::max(terms, 1);
  out.beta_inv_chi_d = 1.0 + m2 * (2.0 * s - 1.0);
  out.est_error = 2.0 * std::abs(m2) * s_error;
  return out;
}

ChiResult toeplitz_route(const CouplingK& k, double tol, int n_max) {
  ChiResult out;
  out.k = k.k();
  out.route = ChiRoute::toeplitz_direct;
  const Complex m = magnetization(k);
  const Complex m2 = m * m;
  if (k.is_zero()) return out;

  const PhiTable table(k, n_max);
  Complex sum{};
  double last = 0.0, prev = 0.0;
  int used = 0;
  for (int N = 1; N <= n_max; ++N) {
    const auto c = diagonal_correlation(table, N);
    const Complex dev = c.value - m2;
    sum += dev;
    prev = last;
    last = std::abs(dev);
    used = N;
    if (!c.reliable) {
      out.flagged = true;
      out.message = "ill-conditioned Toeplitz determinant";
    }
    // Deviations decay like |k|^{2N}; stop below tol with a geometric tail.
    if (N >= 4 && last < tol * 1e-3) break;
  }
  const double ratio = prev > 0.0 ? std::min(last / prev, 0.999) : 0.0;
  const double tail = last * ratio / (1.0 - ratio);
  out.beta_inv_chi_d = 1.0 - m2 + 2.0 * sum;
  out.terms_used = used;
  // Rounding in each determinant, summed, plus the extrapolated tail.
  out.est_error = 2.0 * tail + 2.0 * used * 1e-15;
  if (used == n_max && 2.0 * tail > tol) {
    out.flagged = true;
    out.message = "toeplitz tail not converged at N_max";
  }
  return out;
}

}  // namespace

ChiResult chi_d(const CouplingK& k, double tol, ChiRoute route, const ChiOptions& options) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  ChiResult out;
  switch (route) {
    case ChiRoute::fredholm: {
      const auto s = s_via_fredholm_detailed(k, tol);
      out = from_s(k, route, s.value, s.terms_used, s.est_error);
      break;
    }
    case ChiRoute::toeplitz_direct:
      out = toeplitz_route(k, tol, options.n_max_toeplitz);
      break;
    case ChiRoute::integral: {
      const auto s = s_total(k.kappa(), options.n_max_integral, options.spec);
      out = from_s(k, route, s.value, options.n_max_integral, s.abs_error_est + s.tail_estimate);
      if (s.tail_estimate > tol) {
        out.flagged = true;
        out.message = "form-factor tail above tolerance";
      }
      break;
    }
  }
  if (k.is_physical()) out.beta_inv_chi_d.imag(0.0);
  return out;
}

std::vector<ChiResult> sweep(const std::vector<CouplingK>& grid, ChiRoute route, double tol,
                             const ChiOptions& options) {
  std::vector<ChiResult> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      rows[i] = chi_d(grid[i], tol, route, options);
    } catch (const std::exception& e) {
      ChiResult bad;
      bad.k = grid[i].k();
      bad.route = route;
      bad.beta_inv_chi_d = Complex{NAN, NAN};
      bad.est_error = INFINITY;
      bad.flagged = true;
      bad.message = e.what();
      rows[i] = bad;
    }
  });
  return rows;
}

}  // namespace isinglab
