#include "isinglab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isinglab {

HankelTruncation hankel_matrix(const SeriesCoeffs& coeffs, int N, int cutoff) {
  if (N < 1 || cutoff < 1) throw DomainError("hankel_matrix needs N >= 1 and cutoff >= 1");
  const int needed = N + 2 * cutoff - 1;
  if (coeffs.max_degree() < needed) {
    std::ostringstream msg;
    msg << "series reaches degree " << coeffs.max_degree() << " but H_" << N << " at cutoff "
        << cutoff << " needs degree " << needed << " (length " << needed + 1 << ")";
    throw DomainError(msg.str());
  }
  HankelTruncation h;
  h.N = N;
  h.cutoff = cutoff;
  h.entries.resize(cutoff, cutoff);
  for (int i = 0; i < cutoff; ++i)
    for (int j = 0; j < cutoff; ++j) h.entries(i, j) = coeffs.at(N + i + j + 1);

  // Geometric fit |psi_d| ~ C q^d on the last stored degrees.
  const int hi = coeffs.max_degree();
  const int lo = std::max(needed - 8, std::max(1, coeffs.min_degree));
  double q = 0.0, c = 0.0;
  for (int d = lo; d < hi; ++d) {
    const double a = std::abs(coeffs.at(d)), b = std::abs(coeffs.at(d + 1));
    if (a > 0.0) q = std::max(q, b / a);
  }
  double stored_tail = 0.0;
  for (int d = needed + 1; d <= hi; ++d) stored_tail += std::abs(coeffs.at(d));
  if (q > 0.0 && q < 1.0) {
    c = std::abs(coeffs.at(hi));
    stored_tail += c * q / (1.0 - q);
  }
  h.tail_bound = stored_tail + coeffs.truncation_error;
  return h;
}

namespace {

Complex det_at_cutoff(const SeriesCoeffs& lam, const SeriesCoeffs& lam_inv, int N, int cutoff) {
  const auto a = hankel_matrix(lam, N, cutoff);
  const auto b = hankel_matrix(lam_inv, N, cutoff);
  const ComplexMatrix m = ComplexMatrix::Identity(cutoff, cutoff) - a.entries * b.entries;
  return log_determinant(m).value();
}

int initial_cutoff(double r, int N, double tol) {
  // Smallest c with r^{N + 2c} < tol (1 - r).
  const double target = std::log(tol * (1.0 - r));
  const double c = (target / std::log(r) - N) / 2.0;
  return std::clamp(static_cast<int>(std::ceil(c)), 1, kMaxHankelCutoff);
}

}  // namespace

FredholmResult fredholm_det(const CouplingK& k, int N, double tol) {
  if (N < 1) throw DomainError("fredholm_det needs N >= 1");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  FredholmResult out;
  out.N = N;
  if (k.is_zero()) return out;

  int cutoff = initial_cutoff(k.modulus(), N, tol);
  auto series_len = [N](int c) { return static_cast<std::size_t>(N + 4 * c + 1); };
  auto [lam, lam_inv] = lambda_series(k, series_len(2 * cutoff));

  Complex prev = det_at_cutoff(lam, lam_inv, N, cutoff);
  while (true) {
    const int next = 2 * cutoff;
    if (next > kMaxHankelCutoff) {
      std::ostringstream msg;
      msg << "fredholm_det(N=" << N << ") did not reach tol " << tol << " below cutoff "
          << kMaxHankelCutoff;
      throw ConvergenceError(msg.str(), prev.real(), std::abs(prev - out.det_value));
    }
    if (lam.max_degree() < N + 2 * next - 1) {
      std::tie(lam, lam_inv) = lambda_series(k, series_len(2 * next));
    }
    const Complex cur = det_at_cutoff(lam, lam_inv, N, next);
    const double gap = std::abs(cur - prev);
    if (gap < tol) {
      out.det_value = k.is_physical() ? Complex{cur.real(), 0.0} : cur;
      out.cutoff_used = next;
      out.est_error = gap;
      return out;
    }
    out.det_value = cur;
    prev = cur;
    cutoff = next;
  }
}

SResult s_via_fredholm_detailed(const CouplingK& k, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  SResult out;
  if (k.is_zero()) return out;

  const double r = k.modulus();
  // Terms behave like r^{2N}; stop once the term and its geometric tail are
  // below tol.
  const double ratio = r * r;
  constexpr int kMaxTerms = 100000;
  double prev_mag = 0.0;
  int growth_streak = 0;
  for (int N = 1; N <= kMaxTerms; ++N) {
    const auto f = fredholm_det(k, N, tol * 1e-3);
    const Complex term = f.det_value - 1.0;
    out.value += term;
    out.est_error += f.est_error;
    out.terms_used = N;
    const double mag = std::abs(term);
    growth_streak = (N > 2 && mag > prev_mag) ? growth_streak + 1 : 0;
    if (growth_streak >= 8) {
      throw ConvergenceError("s_via_fredholm: terms are not decaying (divergence suspected)",
                             out.value.real(), mag);
    }
    prev_mag = mag;
    const double tail = mag * ratio / (1.0 - ratio);
    if (N >= 2 && mag < tol && tail < tol) {
      out.est_error += tail;
      break;
    }
  }
  if (k.is_physical()) out.value.imag(0.0);
  return out;
}

Complex s_via_fredholm(const CouplingK& k, double tol) { return s_via_fredholm_detailed(k, tol).value; }

}  // namespace isinglab
