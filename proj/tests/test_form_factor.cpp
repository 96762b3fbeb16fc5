#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "isinglab/form_factor.hpp"
#include "isinglab/fredholm.hpp"
#include "isinglab/quadrature.hpp"

using namespace isinglab;

namespace {

constexpr double pi = std::numbers::pi;

// Plain Gauss-Legendre sum over [0,1]^{2n} in t with x = sin^2(pi t / 2),
// applied to the pointwise integrand.
Complex brute_force(Complex kappa, int n, int nodes) {
  const auto rule = gauss_legendre(nodes);
  std::vector<double> xs(rule.size()), ws(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double s = std::sin(pi * rule.nodes[i] / 2.0), c = std::cos(pi * rule.nodes[i] / 2.0);
    xs[i] = s * s;
    ws[i] = rule.weights[i] * pi * s * c;
  }
  const std::size_t m = rule.size();
  const std::size_t dims = static_cast<std::size_t>(2 * n);
  std::size_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) total *= m;
  Complex sum{};
  std::vector<double> x(n), y(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    double w = 1.0;
    for (int d = 0; d < 2 * n; ++d) {
      const std::size_t i = rest % m;
      rest /= m;
      (d < n ? x[d] : y[d - n]) = xs[i];
      w *= ws[i];
    }
    sum += w * sn_integrand_vandermonde(x, y, kappa);
  }
  return sum * sn_prefactor(SnForm::vandermonde, n, kappa);
}

struct ThreadsEnv {
  explicit ThreadsEnv(const char* value) { setenv("ISING_LAB_THREADS", value, 1); }
  ~ThreadsEnv() { unsetenv("ISING_LAB_THREADS"); }
};

}  // namespace

TEST_CASE("lambda1") {
  CHECK(lambda1(0.5, 0.0) == Complex(1.0, 0.0));
  for (double x : {0.01, 0.3, 0.77, 0.999}) {
    const Complex kappa{0.4, -0.3};
    const Complex l = lambda1(x, kappa);
    CHECK(std::abs(l * l * x - (1.0 - x) * (1.0 - kappa * x)) < 1e-15);
  }
  CHECK(lambda1(0.9, 0.25).real() == doctest::Approx(std::sqrt(0.1 * 0.775 / 0.9)).epsilon(1e-15));
  CHECK(lambda1(0.9, 0.25).imag() == 0.0);
  CHECK_THROWS_AS(lambda1(0.0, 0.1), DomainError);
  CHECK_THROWS_AS(lambda1(1.0, 0.1), DomainError);
  CHECK_THROWS_AS(lambda1(1.5, 0.1), DomainError);
}

TEST_CASE("pointwise integrands") {
  const Complex kappa{0.3, 0.2};

  SUBCASE("n = 1 reduction") {
    const std::array<double, 1> x{0.35}, y{0.8};
    const double p = x[0] * y[0];
    const Complex expected = p / (1.0 - kappa * p) / ((1.0 - kappa * p) * (1.0 - kappa * p)) *
                             lambda1(x[0], kappa) / lambda1(y[0], kappa);
    CHECK(std::abs(sn_integrand_vandermonde(x, y, kappa) - expected) < 1e-15);
  }

  SUBCASE("coincident coordinates vanish") {
    const std::array<double, 2> x{0.4, 0.4}, y{0.2, 0.7};
    CHECK(std::abs(sn_integrand_vandermonde(x, y, kappa)) == 0.0);
  }

  SUBCASE("Cauchy and Vandermonde forms agree with their prefactors") {
    const std::array<std::array<double, 3>, 4> points{{{0.11, 0.52, 0.93},
                                                       {0.27, 0.64, 0.35},
                                                       {0.81, 0.06, 0.47},
                                                       {0.72, 0.38, 0.99}}};
    for (int n = 1; n <= 3; ++n) {
      for (std::size_t a = 0; a + 1 < points.size(); ++a) {
        const std::span<const double> x(points[a].data(), n), y(points[a + 1].data(), n);
        const Complex cauchy = sn_prefactor(SnForm::cauchy, n, kappa) * sn_integrand_cauchy(x, y, kappa);
        const Complex vander = sn_prefactor(SnForm::vandermonde, n, kappa) * sn_integrand_vandermonde(x, y, kappa);
        // The Cauchy determinant is small against O(1) entries, so LU loses digits.
        CHECK(std::abs(cauchy - vander) <= 1e-11 * std::abs(vander));
      }
    }
  }
}

TEST_CASE("s_n") {
  CHECK(s_n(0.0, 1, QuadratureSpec::gauss(16)).value == Complex(0.0, 0.0));
  CHECK(s_n(0.0, 3, QuadratureSpec::monte_carlo(1000, 1)).value == Complex(0.0, 0.0));

  SUBCASE("tensor kernels against a plain grid sum") {
    for (Complex kappa : {Complex(0.3, 0.0), Complex(-0.5, 0.4)}) {
      const Complex s1 = s_n(kappa, 1, QuadratureSpec::gauss(24)).value;
      CHECK(std::abs(s1 - brute_force(kappa, 1, 24)) <= 1e-13 * std::abs(s1));
      const Complex s2 = s_n(kappa, 2, QuadratureSpec::gauss(10)).value;
      CHECK(std::abs(s2 - brute_force(kappa, 2, 10)) <= 1e-12 * std::abs(s2));
    }
  }

  SUBCASE("self-convergence at kappa = 0.5") {
    const Complex a = s_n(0.5, 1, QuadratureSpec::gauss(64)).value;
    const Complex b = s_n(0.5, 1, QuadratureSpec::gauss(96)).value;
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
  }

  SUBCASE("S_1 at kappa = 0.09 from the Fredholm route") {
    const auto spec = QuadratureSpec::gauss(48);
    const Complex s = s_via_fredholm(CouplingK::physical(0.3), 1e-15);
    const Complex s2 = s_n(0.09, 2, spec).value;
    CHECK(std::abs(s_n(0.09, 1, spec).value - (s - s2)) <= 1e-6);
  }

  SUBCASE("tensor rules are for n <= 2") {
    CHECK_THROWS_AS(s_n(0.2, 3, QuadratureSpec::gauss(8)), DomainError);
    CHECK_THROWS_AS(s_n(1.0, 1, QuadratureSpec::gauss(8)), DomainError);
  }

  SUBCASE("real kappa gives real values") {
    CHECK(s_n(0.4, 2, QuadratureSpec::gauss(16)).value.imag() == 0.0);
  }
}

TEST_CASE("Monte Carlo evaluation") {
  const auto mc = QuadratureSpec::monte_carlo(1u << 16, 7);

  SUBCASE("same seed, any thread count, same bits") {
    Complex one, four;
    {
      ThreadsEnv env("1");
      one = s_n(0.3, 2, mc).value;
    }
    {
      ThreadsEnv env("4");
      four = s_n(0.3, 2, mc).value;
    }
    CHECK(one == four);
    CHECK(s_n(0.3, 2, QuadratureSpec::monte_carlo(1u << 16, 8)).value != one);
  }

  SUBCASE("agrees with tensor Gauss within its error estimate") {
    for (int n = 1; n <= 2; ++n) {
      const auto sample = s_n({0.3, 0.2}, n, QuadratureSpec::monte_carlo(1u << 18, 11));
      const auto exact = s_n({0.3, 0.2}, n, QuadratureSpec::gauss(40));
      CHECK(sample.method == QuadratureMethod::monte_carlo);
      CHECK(sample.abs_error_est > 0.0);
      CHECK(std::abs(sample.value - exact.value) <= 5.0 * sample.abs_error_est);
    }
  }

  SUBCASE("an unreachable target is flagged") {
    auto spec = QuadratureSpec::monte_carlo(4096, 3);
    spec.target_rel_error = 1e-12;
    CHECK(s_n(0.3, 3, spec).flagged);
  }

  SUBCASE("beta variates stay inside the open interval") {
    for (std::uint64_t i = 0; i < 2000; ++i) {
      const double x = sample_beta_x(5, i, 0), y = sample_beta_y(5, i, 5);
      CHECK(x > 0.0);
      CHECK(x < 1.0);
      CHECK(y > 0.0);
      CHECK(y < 1.0);
    }
  }
}

TEST_CASE("Sn1 and Sn2 agree") {
  for (Complex kappa : {Complex(0.2, 0.0), Complex(0.5, 0.0), Complex(0.0, 0.5)}) {
    for (int n = 1; n <= 2; ++n) {
      const auto spec = QuadratureSpec::gauss(n == 1 ? 64 : 32);
      const auto a = s_n(kappa, n, spec, SnForm::cauchy);
      const auto b = s_n(kappa, n, spec, SnForm::vandermonde);
      CHECK(std::abs(a.value - b.value) <= a.abs_error_est + b.abs_error_est + 1e-14 * std::abs(b.value));
    }
  }
}

TEST_CASE("s_total") {
  CHECK(s_total(0.0, 2, QuadratureSpec::gauss(16)).value == Complex(0.0, 0.0));

  const auto total = s_total(0.09, 2, QuadratureSpec::gauss(48));
  CHECK(std::abs(total.value - s_via_fredholm(CouplingK::physical(0.3), 1e-15)) <= 1e-6);
  CHECK(total.terms.size() == 2);
  CHECK(total.tail_estimate > 0.0);

  SUBCASE("term ratio follows the prefactor scaling") {
    auto ratio = [](double kappa) {
      const auto t = s_total(kappa, 2, QuadratureSpec::gauss(48));
      return std::abs(t.terms[1].value / t.terms[0].value);
    };
    const double r = ratio(0.25);
    CHECK(r < std::pow(0.25, 4));
    // Halving kappa divides the ratio by about 2^4.
    CHECK(r / ratio(0.125) == doctest::Approx(16.0).epsilon(0.25));
  }
}

TEST_CASE("lint_integral") {
  SUBCASE("ell = 0 is the unnormalised S_n integral") {
    const auto spec = QuadratureSpec::gauss(24);
    for (int n = 1; n <= 2; ++n) {
      const Complex kappa{0.4, 0.1};
      const Complex bare = s_n(kappa, n, spec).value / sn_prefactor(SnForm::vandermonde, n, kappa);
      CHECK(std::abs(lint_integral(kappa, n, 0, spec).value - bare) <= 1e-13 * std::abs(bare));
    }
  }
  SUBCASE("precision warning near the circle") {
    const auto spec = QuadratureSpec::gauss(16, 6);
    CHECK_FALSE(lint_integral(-0.9, 2, 3, spec).precision_warning);
    CHECK(lint_integral(-(1.0 - 1e-8), 2, 3, spec).precision_warning);
  }
  CHECK_THROWS_AS(lint_integral(0.5, 2, -1, QuadratureSpec::gauss(8)), DomainError);
}

TEST_CASE("derivatives of S_n") {
  const auto spec = QuadratureSpec::gauss(64);

  SUBCASE("S_1 starts at kappa^2") {
    CHECK(std::abs(d_ell_s_n(0.0, 1, 1, 0.3, spec).value) <= 1e-14);
    CHECK(std::abs(d_ell_s_n(0.0, 1, 2, 0.3, spec).value) > 1e-3);
  }

  SUBCASE("finite-difference oracle at kappa = 0.2") {
    const double h = 1e-4;
    const Complex fd = (s_n(0.2 + h, 1, spec).value - s_n(0.2 - h, 1, spec).value) / (2.0 * h);
    const Complex cauchy = d_ell_s_n(0.2, 1, 1, 0.1, spec).value;
    CHECK(std::abs(cauchy - fd) <= 1e-6 * std::abs(fd));
    const auto jets = s_n_derivatives(0.2, 1, 1, spec);
    CHECK(std::abs(jets.derivatives[1] - fd) <= 1e-6 * std::abs(fd));
  }

  SUBCASE("contour radius independence") {
    const Complex a = d_ell_s_n(0.3, 1, 2, 0.2, spec).value;
    const Complex b = d_ell_s_n(0.3, 1, 2, 0.3, spec).value;
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
  }

  SUBCASE("conjugation") {
    const Complex kappa{0.2, 0.1};
    const Complex a = d_ell_s_n(kappa, 1, 2, 0.2, spec).value;
    const Complex b = d_ell_s_n(std::conj(kappa), 1, 2, 0.2, spec).value;
    CHECK(std::abs(b - std::conj(a)) <= 1e-12 * std::abs(a));
  }

  SUBCASE("Taylor-mode derivatives match the contour") {
    const auto spec2 = QuadratureSpec::gauss(32);
    for (int n = 1; n <= 2; ++n) {
      const auto& s = n == 1 ? spec : spec2;
      const auto jets = s_n_derivatives(0.3, n, 4, s);
      CHECK(std::abs(jets.derivatives[0] - s_n(0.3, n, s).value) <= 1e-14 * std::abs(jets.derivatives[0]));
      for (int ell = 1; ell <= 4; ++ell) {
        const Complex c = d_ell_s_n(0.3, n, ell, 0.3, s).value;
        CAPTURE(n);
        CAPTURE(ell);
        CHECK(std::abs(jets.derivatives[ell] - c) <= 1e-7 * std::abs(c));
      }
    }
  }

  SUBCASE("domain errors") {
    CHECK_THROWS_AS(d_ell_s_n(0.8, 1, 1, 0.3, spec), DomainError);
    CHECK_THROWS_AS(d_ell_s_n(0.2, 1, 1, 0.0, spec), DomainError);
    CHECK_THROWS_AS(s_n_derivatives(0.2, 1, 99, spec), DomainError);
  }

  SUBCASE("small radius raises the noise warning") {
    CHECK(d_ell_s_n(0.3, 1, 6, 1e-3, QuadratureSpec::gauss(24)).noise_warning);
  }
}

TEST_CASE("quadrature rules") {
  const auto g = gauss_legendre(12);
  double sum = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    sum += g.weights[i];
    moment += g.weights[i] * std::pow(g.nodes[i], 23);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(moment == doctest::Approx(1.0 / 24.0).epsilon(1e-14));

  const auto graded = graded_gauss_legendre(6, 5);
  CHECK(graded.size() == 36);
  double total = 0.0;
  for (double w : graded.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

  const auto rule = endpoint_rule(QuadratureSpec::gauss(40));
  double wx = 0.0, wy = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    wx += rule.weight_x[i];
    wy += rule.weight_y[i];
  }
  CHECK(wx == doctest::Approx(pi / 2).epsilon(1e-14));
  CHECK(wy == doctest::Approx(pi / 2).epsilon(1e-14));

  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
}
