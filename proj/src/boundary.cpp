#include "isinglab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "isinglab/parallel.hpp"

namespace isinglab {

RootOfUnity::RootOfUnity(int p, int q) {
  if (q < 2) throw DomainError("root of unity needs q >= 2");
  p = ((p % q) + q) % q;
  if (std::gcd(p, q) != 1) {
    std::ostringstream msg;
    msg << "p/q = " << p << "/" << q << " is not in lowest terms (or is 1)";
    throw DomainError(msg.str());
  }
  p_ = p;
  q_ = q;
  // Exact values on the axes keep e.g. (-1)^2 == 1 bit-exact.
  if (2 * p == q) {
    value_ = {-1.0, 0.0};
  } else if (4 * p == q) {
    value_ = {0.0, 1.0};
  } else if (4 * p == 3 * q) {
    value_ = {0.0, -1.0};
  } else {
    value_ = std::polar(1.0, 2.0 * std::numbers::pi * p / q);
  }
}

RootOfUnity RootOfUnity::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw DomainError("root of unity must be written p/q");
  try {
    std::size_t used_p = 0, used_q = 0;
    const std::string ps = text.substr(0, slash), qs = text.substr(slash + 1);
    const int p = std::stoi(ps, &used_p);
    const int q = std::stoi(qs, &used_q);
    if (used_p != ps.size() || used_q != qs.size()) throw std::invalid_argument(text);
    return RootOfUnity(p, q);
  } catch (const std::logic_error&) {
    throw DomainError("cannot parse root of unity '" + text + "'");
  }
}

std::vector<double> smoothness_radii() { return dyadic_radii(4, 16); }

std::vector<double> dyadic_radii(int j_first, int j_last) {
  if (j_first < 1 || j_last < j_first) throw DomainError("radii need 1 <= j_first <= j_last");
  std::vector<double> r;
  for (int j = j_first; j <= j_last; ++j) r.push_back(1.0 - std::ldexp(1.0, -j));
  return r;
}

namespace {

void check_radii(const std::vector<double>& radii) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < 1.0)) throw DomainError("radii must lie in (0, 1)");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw DomainError("radii must be strictly increasing");
  }
}

void fill_fit(RadialScan& scan) {
  if (scan.radii.size() < 4) return;
  const LogFit fit = log_fit(scan);
  scan.fit_slope = fit.slope;
  scan.fit_intercept = fit.intercept;
  scan.fit_r2 = fit.r2;
  scan.fit_slope_stderr = fit.slope_stderr;
  scan.classification = classify(scan.radii, scan.values);
}

}  // namespace

LogFit log_fit(const std::vector<double>& radii, const std::vector<Complex>& values) {
  if (radii.size() != values.size()) throw DomainError("radii and values differ in length");
  const std::size_t n = radii.size();
  if (n < 4) throw DomainError("log_fit needs at least 4 points");
  std::vector<double> L(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(radii[i] < 1.0)) throw DomainError("log_fit radii must be < 1");
    L[i] = std::log(1.0 / (1.0 - radii[i]));
    v[i] = values[i].real();
  }
  const double mL = std::accumulate(L.begin(), L.end(), 0.0) / n;
  const double mv = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (L[i] - mL) * (L[i] - mL);
    sxy += (L[i] - mL) * (v[i] - mv);
    syy += (v[i] - mv) * (v[i] - mv);
  }
  if (!(sxx > 1e-14 * std::max(1.0, mL * mL))) throw DomainError("log_fit abscissas are degenerate");
  LogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mv - fit.slope * mL;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = v[i] - (fit.intercept + fit.slope * L[i]);
    ssr += r * r;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  fit.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

LogFit log_fit(const RadialScan& scan) { return log_fit(scan.radii, scan.values); }

Classification classify(const std::vector<double>& radii, const std::vector<Complex>& values) {
  if (radii.size() != values.size()) throw DomainError("radii and values differ in length");
  Classification c;
  const std::size_t n = values.size();
  if (n < 4) return c;
  const std::size_t first = n > kClassificationWindow ? n - kClassificationWindow : 0;
  const std::vector<double> wr(radii.begin() + static_cast<std::ptrdiff_t>(first), radii.end());
  const std::vector<Complex> wv(values.begin() + static_cast<std::ptrdiff_t>(first), values.end());
  const LogFit fit = log_fit(wr, wv);
  c.slope_significance = fit.slope_stderr > 0.0 ? std::abs(fit.slope) / fit.slope_stderr
                         : fit.slope != 0.0     ? INFINITY
                                                : 0.0;
  double max_step = 0.0, vmax = 0.0, vmin = INFINITY;
  for (std::size_t i = 0; i < wv.size(); ++i) {
    const double v = wv[i].real();
    if (i > 0) max_step = std::max(max_step, std::abs(v - wv[i - 1].real()));
  }
  for (const auto& v : values) {
    vmax = std::max(vmax, std::abs(v.real()));
    vmin = std::min(vmin, std::abs(v.real()));
  }
  const double net = std::abs(wv.back().real() - wv.front().real());
  c.growth_ratio = max_step > 0.0 ? net / max_step : 0.0;
  c.max_min_ratio = vmin > 0.0 ? vmax / vmin : INFINITY;
  c.diverging = c.slope_significance > kSlopeSignificance && c.growth_ratio > kGrowthRatio;
  return c;
}

RadialScan make_scan(const RootOfUnity& epsilon, int n, int ell, std::vector<double> radii,
                     std::vector<Complex> values) {
  check_radii(radii);
  if (radii.size() != values.size()) throw DomainError("radii and values differ in length");
  RadialScan scan;
  scan.epsilon = epsilon;
  scan.n = n;
  scan.ell = ell;
  scan.radii = std::move(radii);
  scan.values = std::move(values);
  scan.abs_error_est.assign(scan.radii.size(), 0.0);
  scan.precision_warning.assign(scan.radii.size(), false);
  fill_fit(scan);
  return scan;
}

RadialScan radial_scan(const RootOfUnity& epsilon, int n, int ell, const std::vector<double>& radii,
                       const QuadratureSpec& spec) {
  if (epsilon.q() != n) {
    std::ostringstream msg;
    msg << "epsilon = " << epsilon.p() << "/" << epsilon.q() << " is not a primitive " << n
        << "-th root of unity";
    throw DomainError(msg.str());
  }
  check_radii(radii);
  std::vector<Complex> values;
  std::vector<double> errs;
  std::vector<bool> warn;
  // Each point already runs its quadrature in parallel.
  for (double r : radii) {
    const auto res = lint_integral(r * epsilon.value(), n, ell, spec);
    values.push_back(res.value);
    errs.push_back(res.abs_error_est);
    warn.push_back(res.precision_warning);
  }
  RadialScan scan = make_scan(epsilon, n, ell, radii, std::move(values));
  scan.abs_error_est = std::move(errs);
  scan.precision_warning = std::move(warn);
  return scan;
}

SmoothnessReport smoothness_probe(int ell_max, const RootOfUnity& epsilon,
                                  const QuadratureSpec& spec, const std::vector<double>& radii) {
  if (ell_max < 0) throw DomainError("ell_max must be nonnegative");
  check_radii(radii);
  const std::size_t count = radii.size();
  std::vector<DerivativeSeries> d1, d2;
  for (double r : radii) {
    const Complex kappa = r * epsilon.value();
    d1.push_back(s_n_derivatives(kappa, 1, ell_max, spec));
    d2.push_back(s_n_derivatives(kappa, 2, ell_max, spec));
  }
  SmoothnessReport report;
  report.epsilon = epsilon;
  for (int ell = 0; ell <= ell_max; ++ell) {
    const auto l = static_cast<std::size_t>(ell);
    std::vector<Complex> v1(count), v2(count), vt(count);
    for (std::size_t i = 0; i < count; ++i) {
      v1[i] = d1[i].derivatives[l];
      v2[i] = d2[i].derivatives[l];
      vt[i] = v1[i] + v2[i];
    }
    SmoothnessEntry e;
    e.ell = ell;
    e.s1 = make_scan(epsilon, 1, ell, radii, v1);
    e.s2 = make_scan(epsilon, 2, ell, radii, v2);
    e.total = make_scan(epsilon, 0, ell, radii, vt);
    for (std::size_t i = 0; i < count; ++i) {
      e.s1.abs_error_est[i] = d1[i].abs_error_est[l];
      e.s2.abs_error_est[i] = d2[i].abs_error_est[l];
      e.total.abs_error_est[i] = d1[i].abs_error_est[l] + d2[i].abs_error_est[l];
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

QuadratureSpec boundary_spec(const std::vector<double>& radii, int nodes_per_panel) {
  // 1 - x ~ (pi/2)^2 (1 - t)^2 near the corner, so resolving a gap
  // 1 - r ~ 2^-j needs t-panels down to about 2^-(j/2), plus margin.
  double finest = 0.5;
  for (double r : radii) finest = std::min(finest, 1.0 - r);
  const int j = static_cast<int>(std::ceil(-std::log2(finest)));
  return QuadratureSpec::gauss(nodes_per_panel, std::max(4, j / 2 + 4));
}

}  // namespace isinglab
