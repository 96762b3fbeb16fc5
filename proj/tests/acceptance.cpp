#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "isinglab/boundary.hpp"
#include "isinglab/chi.hpp"
#include "isinglab/form_factor.hpp"
#include "isinglab/fredholm.hpp"
#include "isinglab/toeplitz.hpp"

using namespace isinglab;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Verdict gcbo_identity() {
  double worst = 0.0;
  for (double kv : {0.1, 0.3, 0.5, 0.7}) {
    const auto k = CouplingK::physical(kv);
    const Complex m = magnetization(k);
    const PhiTable table(k, 8);
    for (int N = 1; N <= 8; ++N) {
      const Complex d = diagonal_correlation(table, N).value;
      const Complex f = fredholm_det(k, N, 1e-15).det_value;
      worst = std::max(worst, std::abs(d - m * m * f) / std::abs(d));
    }
  }
  return {worst <= 1e-8, "max relative residual " + sci(worst)};
}

Verdict s_route_equivalence() {
  const auto spec = QuadratureSpec::gauss(64);
  double gaps[2];
  const double ks[2] = {0.3, 0.2};
  for (int i = 0; i < 2; ++i) {
    const auto k = CouplingK::physical(ks[i]);
    const Complex s12 = s_n(k.kappa(), 1, spec).value + s_n(k.kappa(), 2, QuadratureSpec::gauss(32)).value;
    gaps[i] = std::abs(s_via_fredholm(k, 1e-15) - s12);
  }
  return {gaps[0] <= 1e-6 && gaps[1] <= 1e-8,
          "k=0.3 gap " + sci(gaps[0]) + ", k=0.2 gap " + sci(gaps[1])};
}

Verdict form_equivalence() {
  double worst = 0.0;
  bool pass = true;
  for (Complex kappa : {Complex(0.2, 0.0), Complex(0.5, 0.0), Complex(0.0, 0.5)}) {
    for (int n = 1; n <= 2; ++n) {
      const auto spec = QuadratureSpec::gauss(n == 1 ? 64 : 32);
      const auto a = s_n(kappa, n, spec, SnForm::cauchy);
      const auto b = s_n(kappa, n, spec, SnForm::vandermonde);
      const double gap = std::abs(a.value - b.value);
      const double allowed = a.abs_error_est + b.abs_error_est;
      pass = pass && gap <= allowed;
      worst = std::max(worst, gap / std::abs(b.value));
    }
  }
  return {pass, "max relative gap " + sci(worst) + " within combined estimates"};
}

Verdict chi_agreement() {
  double toeplitz = 0.0, integral = 0.0;
  for (int i = 1; i <= 7; ++i) {
    const auto k = CouplingK::physical(0.1 * i);
    const Complex f = chi_d(k, 1e-12, ChiRoute::fredholm).beta_inv_chi_d;
    const Complex t = chi_d(k, 1e-12, ChiRoute::toeplitz_direct).beta_inv_chi_d;
    toeplitz = std::max(toeplitz, std::abs(f - t) / std::abs(f));
    if (i <= 4) {
      const Complex g = chi_d(k, 1e-12, ChiRoute::integral).beta_inv_chi_d;
      integral = std::max(integral, std::abs(f - g) / std::abs(f));
    }
  }
  return {toeplitz <= 1e-6 && integral <= 1e-5,
          "toeplitz_direct " + sci(toeplitz) + ", integral " + sci(integral)};
}

Verdict log_divergence_dichotomy() {
  const auto radii = dyadic_radii(4, 10);
  const auto spec = boundary_spec(radii);
  const RootOfUnity eps(1, 2);
  const auto seven = radial_scan(eps, 2, 7, radii, spec);
  const auto six = radial_scan(eps, 2, 6, radii, spec);
  const double significance = seven.fit_slope / seven.fit_slope_stderr;
  const double range = std::abs(six.values.back() / six.values.front());
  const double slope_ratio = std::abs(seven.fit_slope) / std::abs(six.fit_slope);
  const bool pass = seven.fit_r2 >= 0.99 && significance > kSlopeSignificance &&
                    !six.classification.diverging && range < 10.0 && slope_ratio > 10.0;
  return {pass, "ell=7 slope " + sci(seven.fit_slope) + " (" + sci(significance) + " s.e.), r2 " +
                    sci(seven.fit_r2) + "; ell=6 " +
                    (six.classification.diverging ? "diverging" : "bounded") + ", last/first " +
                    sci(range) + ", slope ratio " + sci(slope_ratio)};
}

std::string verdicts(const std::vector<SmoothnessEntry>& entries, const RadialScan SmoothnessEntry::*part) {
  std::string s;
  for (const auto& e : entries) s += (e.*part).classification.diverging ? 'D' : 'b';
  return s;
}

Verdict s1_bounded(const SmoothnessReport& report) {
  bool pass = report.entries.size() == 8;
  for (const auto& e : report.entries) pass = pass && !e.s1.classification.diverging;
  return {pass, "S1 per ell 0..7: " + verdicts(report.entries, &SmoothnessEntry::s1) + " (b bounded, D diverging)"};
}

Verdict c6_up_to_boundary(const SmoothnessReport& report) {
  bool pass = report.entries.size() == 8;
  for (const auto& e : report.entries) pass = pass && e.total.classification.diverging == (e.ell == 7);
  return {pass, "S1+S2 per ell 0..7: " + verdicts(report.entries, &SmoothnessEntry::total) +
                    ", S2: " + verdicts(report.entries, &SmoothnessEntry::s2)};
}

Verdict trivial_exactness() {
  const auto zero = CouplingK::physical(0.0);
  bool pass = true;
  for (int N = 0; N <= 6; ++N) pass = pass && diagonal_correlation(zero, N).value == Complex(1.0, 0.0);
  for (int N = 1; N <= 6; ++N) pass = pass && fredholm_det(zero, N, 1e-14).det_value == Complex(1.0, 0.0);
  pass = pass && s_n(0.0, 1, QuadratureSpec::gauss(16)).value == Complex(0.0, 0.0);
  pass = pass && s_n(0.0, 2, QuadratureSpec::gauss(16)).value == Complex(0.0, 0.0);
  pass = pass && s_n(0.0, 3, QuadratureSpec::monte_carlo(1024, 1)).value == Complex(0.0, 0.0);
  for (auto route : {ChiRoute::fredholm, ChiRoute::toeplitz_direct, ChiRoute::integral})
    pass = pass && chi_d(zero, 1e-12, route).beta_inv_chi_d == Complex(0.0, 0.0);
  return {pass, "D(N)=1, det(I-K_N)=1, S_n=0, chi=0 compared with =="};
}

std::string run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  cli::run(args, out, err);
  return out.str();
}

Verdict determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"ising_lab", "sweep", "--grid", "0:0.7:0.1", "--route", "fredholm"},
      {"ising_lab", "sweep", "--grid", "0.1,0.3", "--route", "integral"},
      {"ising_lab", "sn", "--kappa", "0.25,0.1", "--n", "3", "--mc-samples", "65536", "--seed", "9"},
      {"ising_lab", "boundary-scan", "--eps", "1/2", "--n", "2", "--ell", "7", "--radii", "4..8"}};
  bool pass = true;
  for (const auto& args : commands) {
    setenv("ISING_LAB_THREADS", "1", 1);
    const std::string a = run_cli(args);
    setenv("ISING_LAB_THREADS", "4", 1);
    const std::string b = run_cli(args);
    const std::string c = run_cli(args);
    pass = pass && !a.empty() && a == b && b == c;
  }
  unsetenv("ISING_LAB_THREADS");
  return {pass, std::to_string(commands.size()) + " commands, 3 runs each, 1 and 4 threads"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& check) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("criterion %d %-28s %s  %s\n", id, name, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "gcbo-identity", gcbo_identity);
  report(2, "s-route-equivalence", s_route_equivalence);
  report(3, "form-equivalence", form_equivalence);
  report(4, "chi-route-agreement", chi_agreement);
  report(5, "log-divergence-dichotomy", log_divergence_dichotomy);

  SmoothnessReport smooth;
  std::string smooth_error;
  try {
    const auto radii = smoothness_radii();
    smooth = smoothness_probe(7, RootOfUnity(1, 2), boundary_spec(radii), radii);
  } catch (const std::exception& e) {
    smooth_error = e.what();
  }
  auto with_probe = [&](Verdict (*f)(const SmoothnessReport&)) {
    return [&, f] {
      if (!smooth_error.empty()) return Verdict{false, "smoothness probe failed: " + smooth_error};
      return f(smooth);
    };
  };
  report(6, "s1-derivatives-bounded", with_probe(s1_bounded));
  report(7, "c6-up-to-boundary", with_probe(c6_up_to_boundary));
  report(8, "trivial-exactness", trivial_exactness);
  report(9, "determinism", determinism);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
