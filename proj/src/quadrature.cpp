#include "isinglab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "isinglab/coupling.hpp"

namespace isinglab {

QuadratureSpec QuadratureSpec::gauss(int nodes, int panel_levels) {
  QuadratureSpec s;
  s.method = QuadratureMethod::tensor_gauss;
  s.nodes_per_dim = nodes;
  s.panel_levels = panel_levels;
  return s;
}

QuadratureSpec QuadratureSpec::monte_carlo(std::uint64_t samples, std::uint64_t seed) {
  QuadratureSpec s;
  s.method = QuadratureMethod::monte_carlo;
  s.mc_samples = samples;
  s.seed = seed;
  return s;
}

void QuadratureSpec::validate(int n) const {
  if (n < 1) throw DomainError("form-factor order n must be >= 1");
  if (!(target_rel_error > 0.0)) throw DomainError("target_rel_error must be positive");
  if (method == QuadratureMethod::tensor_gauss) {
    if (n > 2) {
      std::ostringstream msg;
      msg << "tensor_gauss handles n <= 2 (dimension <= 4); n = " << n << " needs monte_carlo";
      throw DomainError(msg.str());
    }
    if (nodes_per_dim < 2) throw DomainError("nodes_per_dim must be >= 2");
    if (panel_levels < 0 || panel_levels > 40) throw DomainError("panel_levels out of range");
  } else if (mc_samples < 2) {
    throw DomainError("monte_carlo needs at least two samples");
  }
}

Rule1D gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be positive");
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton on P_n from the Tricomi initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Half the [-1, 1] weight 2 / ((1 - z^2) P_n'(z)^2).
    const double w = 1.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = 0.5 * (1.0 - z);
    r.nodes[hi] = 0.5 * (1.0 + z);
    r.weights[lo] = r.weights[hi] = w;
  }
  return r;
}

Rule1D graded_gauss_legendre(int nodes_per_panel, int levels) {
  const Rule1D base = gauss_legendre(nodes_per_panel);
  if (levels <= 0) return base;
  std::vector<double> edges{0.0};
  for (int j = 1; j <= levels; ++j) edges.push_back(1.0 - std::ldexp(1.0, -j));
  edges.push_back(1.0);
  Rule1D r;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], h = edges[p + 1] - edges[p];
    for (std::size_t i = 0; i < base.size(); ++i) {
      r.nodes.push_back(a + h * base.nodes[i]);
      r.weights.push_back(h * base.weights[i]);
    }
  }
  return r;
}

EndpointRule endpoint_rule(const Rule1D& t_rule) {
  using std::numbers::pi;
  EndpointRule e;
  e.x.reserve(t_rule.size());
  for (std::size_t i = 0; i < t_rule.size(); ++i) {
    const double t = t_rule.nodes[i];
    const double s = std::sin(0.5 * pi * t), c = std::cos(0.5 * pi * t);
    // dx = pi s c dt, x^{-1/2}(1-x)^{1/2} = c/s, y^{1/2}(1-y)^{-1/2} = s/c.
    e.x.push_back(s * s);
    e.weight_x.push_back(t_rule.weights[i] * pi * c * c);
    e.weight_y.push_back(t_rule.weights[i] * pi * s * s);
  }
  return e;
}

EndpointRule endpoint_rule(const QuadratureSpec& spec) {
  return endpoint_rule(graded_gauss_legendre(spec.nodes_per_dim, spec.panel_levels));
}

EndpointRule coarse_endpoint_rule(const QuadratureSpec& spec) {
  const int coarse = std::max(2, (2 * spec.nodes_per_dim + 2) / 3);
  return endpoint_rule(graded_gauss_legendre(coarse, spec.panel_levels));
}

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Gamma(1/2) and Gamma(3/2) from normal and exponential variates.
double gamma_half(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot) {
  const double u1 = counter_uniform(seed, sample, slot);
  const double u2 = counter_uniform(seed, sample, slot + 1);
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return 0.5 * z * z;
}

double exponential(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot) {
  return -std::log(counter_uniform(seed, sample, slot));
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot) {
  const std::uint64_t h = splitmix(splitmix(splitmix(seed) ^ sample) ^ (slot * 0xd1b54a32d192ed03ULL));
  // 53 random bits, shifted into (0, 1).
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double sample_beta_x(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot) {
  const double a = gamma_half(seed, sample, slot);
  const double b = gamma_half(seed, sample, slot + 2) + exponential(seed, sample, slot + 4);
  return a / (a + b);
}

double sample_beta_y(std::uint64_t seed, std::uint64_t sample, std::uint64_t slot) {
  return 1.0 - sample_beta_x(seed, sample, slot);
}

}  // namespace isinglab
