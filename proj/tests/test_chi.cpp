#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "isinglab/chi.hpp"

using namespace isinglab;

TEST_CASE("chi_d at k = 0 is exactly zero") {
  const auto zero = CouplingK::physical(0.0);
  for (auto route : {ChiRoute::fredholm, ChiRoute::toeplitz_direct, ChiRoute::integral}) {
    const auto r = chi_d(zero, 1e-12, route);
    CHECK(r.beta_inv_chi_d == Complex(0.0, 0.0));
    CHECK_FALSE(r.flagged);
  }
}

TEST_CASE("route names") {
  CHECK(parse_route("fredholm") == ChiRoute::fredholm);
  CHECK(parse_route("toeplitz_direct") == ChiRoute::toeplitz_direct);
  CHECK(parse_route("integral") == ChiRoute::integral);
  CHECK(std::string(to_string(ChiRoute::toeplitz_direct)) == "toeplitz_direct");
  CHECK_THROWS_AS(parse_route("nystrom"), DomainError);
}

TEST_CASE("routes agree at k = 0.3") {
  const auto k = CouplingK::physical(0.3);
  const auto f = chi_d(k, 1e-12, ChiRoute::fredholm);
  const auto t = chi_d(k, 1e-12, ChiRoute::toeplitz_direct);
  const auto i = chi_d(k, 1e-12, ChiRoute::integral);
  CHECK(std::abs(f.beta_inv_chi_d - t.beta_inv_chi_d) <= 1e-6 * std::abs(f.beta_inv_chi_d));
  CHECK(std::abs(f.beta_inv_chi_d - i.beta_inv_chi_d) <= 1e-5 * std::abs(f.beta_inv_chi_d));
  CHECK(f.beta_inv_chi_d.real() > 0.0);
  CHECK(f.beta_inv_chi_d.imag() == 0.0);
}

TEST_CASE("toeplitz route flags an exhausted separation cap") {
  ChiOptions options;
  options.n_max_toeplitz = 3;
  const auto r = chi_d(CouplingK::physical(0.7), 1e-12, ChiRoute::toeplitz_direct, options);
  CHECK(r.flagged);
  CHECK(std::isfinite(r.beta_inv_chi_d.real()));
}

TEST_CASE("sweep") {
  CHECK(sweep({}, ChiRoute::fredholm, 1e-12).empty());

  const auto single = sweep({CouplingK::physical(0.0)}, ChiRoute::fredholm, 1e-12);
  REQUIRE(single.size() == 1);
  CHECK(single[0].beta_inv_chi_d == Complex(0.0, 0.0));

  std::vector<CouplingK> grid;
  for (int i = 1; i <= 8; ++i) grid.push_back(CouplingK::physical(0.1 * i));
  const auto rows = sweep(grid, ChiRoute::fredholm, 1e-12);
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].k == grid[i].k());
    CHECK(std::isfinite(rows[i].beta_inv_chi_d.real()));
    CHECK(rows[i].beta_inv_chi_d.imag() == 0.0);
    CHECK_FALSE(rows[i].flagged);
    if (i > 0) CHECK(rows[i].beta_inv_chi_d.real() > rows[i - 1].beta_inv_chi_d.real());
  }

  SUBCASE("thread count does not change results") {
    setenv("ISING_LAB_THREADS", "3", 1);
    const auto threaded = sweep(grid, ChiRoute::toeplitz_direct, 1e-12);
    setenv("ISING_LAB_THREADS", "1", 1);
    const auto serial = sweep(grid, ChiRoute::toeplitz_direct, 1e-12);
    unsetenv("ISING_LAB_THREADS");
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(threaded[i].beta_inv_chi_d == serial[i].beta_inv_chi_d);
  }

  SUBCASE("a failing point becomes a flagged row") {
    const auto bad = sweep({CouplingK::physical(0.2), CouplingK::physical(0.3)}, ChiRoute::fredholm, 0.0);
    REQUIRE(bad.size() == 2);
    for (const auto& r : bad) {
      CHECK(r.flagged);
      CHECK(std::isnan(r.beta_inv_chi_d.real()));
      CHECK_FALSE(r.message.empty());
    }
  }

  SUBCASE("a truncated form-factor series is flagged") {
    ChiOptions options;
    options.n_max_integral = 1;
    options.spec = QuadratureSpec::gauss(32);
    const auto r = sweep({CouplingK::physical(0.5)}, ChiRoute::integral, 1e-12, options);
    CHECK(r[0].flagged);
  }
}
