#pragma once

#include <string>
#include <vector>

#include "isinglab/coupling.hpp"
#include "isinglab/form_factor.hpp"
#include "isinglab/quadrature.hpp"

namespace isinglab {

/// exp(2 pi i p / q) with gcd(p, q) = 1 and q >= 2; p is reduced mod q.
class RootOfUnity {
 public:
  RootOfUnity(int p, int q);
  /// Parses "p/q".
  static RootOfUnity parse(const std::string& text);

  int p() const { return p_; }
  int q() const { return q_; }
  Complex value() const { return value_; }

 private:
  int p_;
  int q_;
  Complex value_;
};

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
};

/// Bounded/diverging verdict for values sampled along a radius.
///
/// Only the trailing kClassificationWindow radii are used, where transients
/// from the bounded part have decayed. Diverging means both: the log-law
/// slope over the window is more than 5 standard errors away from zero, and
/// the net change across the window exceeds 3 times the largest change
/// between neighbouring radii. On a grid uniform in log(1/(1 - r)) a log
/// divergence takes equal steps, while a bounded approach to a limit takes
/// geometrically shrinking ones.
struct Classification {
  bool diverging = false;
  double slope_significance = 0.0;  // |slope| / stderr
  double growth_ratio = 0.0;        // window: |v_last - v_first| / largest step
  double max_min_ratio = 1.0;       // whole scan: max |v| / min |v|
};

inline constexpr double kSlopeSignificance = 5.0;
inline constexpr double kGrowthRatio = 3.0;
inline constexpr std::size_t kClassificationWindow = 6;

struct RadialScan {
  RootOfUnity epsilon{1, 2};
  int n = 1;
  int ell = 0;
  std::vector<double> radii;
  std::vector<Complex> values;
  std::vector<double> abs_error_est;
  std::vector<bool> precision_warning;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double fit_r2 = 0.0;
  double fit_slope_stderr = 0.0;
  Classification classification;
};

/// Radii 1 - 2^-j for j = j_first..j_last.
std::vector<double> dyadic_radii(int j_first = 4, int j_last = 10);

/// Least squares of Re(values) against L = log(1 / (1 - r)). Needs >= 4 points
/// and non-degenerate abscissas.
LogFit log_fit(const std::vector<double>& radii, const std::vector<Complex>& values);
LogFit log_fit(const RadialScan& scan);

Classification classify(const std::vector<double>& radii, const std::vector<Complex>& values);

/// lint_integral(r epsilon, n, ell) along the given radii; epsilon must be an
/// n-th root of unity other than 1.
RadialScan radial_scan(const RootOfUnity& epsilon, int n, int ell, const std::vector<double>& radii,
                       const QuadratureSpec& spec);

/// Builds a scan from externally computed values and fills fit/classification.
RadialScan make_scan(const RootOfUnity& epsilon, int n, int ell, std::vector<double> radii,
                     std::vector<Complex> values);

struct SmoothnessEntry {
  int ell = 0;
  RadialScan s1;     // d^ell S_1 / d kappa^ell
  RadialScan s2;     // d^ell S_2 / d kappa^ell
  RadialScan total;  // sum of the two
};

struct SmoothnessReport {
  RootOfUnity epsilon{1, 2};
  std::vector<SmoothnessEntry> entries;
};

/// Default radii for derivative probes. Derivatives carry an O(1) bounded
/// part whose transient masks a log term until 1 - r ~ 2^-11, so the grid
/// runs deeper than the plain scans.
std::vector<double> smoothness_radii();

/// Derivatives of S_1 + S_2 of order 0..ell_max along kappa = r epsilon,
/// classified per order.
SmoothnessReport smoothness_probe(int ell_max, const RootOfUnity& epsilon,
                                  const QuadratureSpec& spec,
                                  const std::vector<double>& radii = smoothness_radii());

/// Quadrature used for boundary scans: graded panels deep enough for the
/// finest radius in the grid.
QuadratureSpec boundary_spec(const std::vector<double>& radii, int nodes_per_panel = 5);

}  // namespace isinglab
