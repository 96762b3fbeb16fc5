#pragma once

#include <cstdint>
#include <vector>

namespace isinglab {

enum class QuadratureMethod { tensor_gauss, monte_carlo };

/// How a multiple integral over [0,1]^{2n} is evaluated.
///
/// tensor_gauss maps every axis through x = sin^2(pi t / 2) and applies a
/// Gauss-Legendre rule in t. With panel_levels = L > 0 the t-axis is split at
/// 1 - 2^-1, ..., 1 - 2^-L and each panel carries nodes_per_dim nodes, which
/// resolves integrands peaked at the corner x = y = 1. monte_carlo draws
/// coordinates from the Beta densities matching the endpoint exponents.
struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::tensor_gauss;
  int nodes_per_dim = 48;
  int panel_levels = 0;
  std::uint64_t mc_samples = 1u << 20;
  std::uint64_t seed = 0x5eed;
  double target_rel_error = 1e-10;

  static QuadratureSpec gauss(int nodes, int panel_levels = 0);
  static QuadratureSpec monte_carlo(std::uint64_t samples, std::uint64_t seed);

  /// Throws DomainError when the spec cannot integrate a 2n-dimensional term.
  void validate(int n) const;
};

/// Gauss-Legendre nodes and weights on [0, 1].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

Rule1D gauss_legendre(int n);

/// Composite Gauss-Legendre on [0,1], panels graded geometrically toward 1.
Rule1D graded_gauss_legendre(int nodes_per_panel, int levels);

/// Nodes x in (0,1) after x = sin^2(pi t / 2), with the weights of
///   x-axis: int f(x) x^{-1/2} (1-x)^{1/2} dx   (carried by Lambda_1(x))
///   y-axis: int f(y) y^{1/2} (1-y)^{-1/2} dy   (carried by 1/Lambda_1(y))
/// folded in. Both weight integrals equal pi/2.
struct EndpointRule {
  std::vector<double> x;
  std::vector<double> weight_x;
  std::vector<double> weight_y;
  std::size_t size() const { return x.size(); }
};

EndpointRule endpoint_rule(const Rule1D& t_rule);
EndpointRule endpoint_rule(const QuadratureSpec& spec);
/// Same construction with the per-panel node count reduced by about a third;
/// the difference to the full rule serves as the error estimate.
EndpointRule coarse_endpoint_rule(const QuadratureSpec& spec);

/// Counter-based uniform stream: the value depends only on (seed, sample,
/// slot), never on evaluation order.
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot);

/// Beta(1/2, 3/2) variate (density (2/pi) x^{-1/2} (1-x)^{1/2}) built from
/// counter_uniform slots [slot, slot + 5).
double sample_beta_x(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot);
/// Beta(3/2, 1/2) variate, the mirror image of sample_beta_x.
double sample_beta_y(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot);

}  // namespace isinglab
