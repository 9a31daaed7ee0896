#include <doctest.h>

#include <cmath>
#include <vector>

#include "rough/states.hpp"

using namespace rough;

TEST_CASE("make_fock places a single diagonal unit") {
  const auto rho = make_fock(2, 4);
  for (int n = 0; n < 4; ++n)
    for (int m = 0; m < 4; ++m)
      CHECK(rho(n, m) == ((n == 2 && m == 2) ? complexd(1.0) : complexd(0.0)));
  CHECK(make_fock(0, 4)(0, 0).real() == 1.0);
  CHECK_THROWS_AS(make_fock(5, 4), TruncationError);
  try {
    make_fock(5, 4);
  } catch (const TruncationError& e) {
    CHECK(e.suggested_dim == 6);
  }
}

TEST_CASE("make_coherent reproduces Poisson statistics") {
  const auto vac = make_coherent(0.0, 4);
  CHECK(vac(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));

  const complexd alpha(2.0, 0.0);
  const auto rho = make_coherent(alpha, 30);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.hermiticity_residue() == 0.0);
  double logw = -4.0;  // ln Poisson(4) weight at n = 0
  for (int n = 0; n < 12; ++n) {
    CHECK(rho(n, n).real() == doctest::Approx(std::exp(logw)).epsilon(1e-7));
    logw += std::log(4.0) - std::log(n + 1.0);
  }
  CHECK(mean_photon(rho) == doctest::Approx(4.0).epsilon(1e-8));

  CHECK_THROWS_AS(make_coherent(alpha, 5), TruncationError);
  try {
    make_coherent(alpha, 5);
  } catch (const TruncationError& e) {
    CHECK(e.suggested_dim > 10);
    CHECK(e.suggested_dim < 60);
    CHECK_NOTHROW(make_coherent(alpha, e.suggested_dim));
  }
}

TEST_CASE("make_coherent keeps exact Hermitian pairs for complex alpha") {
  const auto rho = make_coherent(complexd(1.0, 0.5), 24);
  for (int n = 0; n < 24; ++n)
    for (int m = 0; m < 24; ++m) CHECK(rho(n, m) == std::conj(rho(m, n)));
}

TEST_CASE("make_thermal geometric weights and tail policy") {
  const auto vac = make_thermal(0.0, 8);
  CHECK(vac(0, 0).real() == 1.0);

  const auto rho = make_thermal(1.0, 40);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-14));
  for (int n = 1; n < 20; ++n)
    CHECK(rho(n, n).real() / rho(n - 1, n - 1).real() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(mean_photon(rho) == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(make_thermal(100.0, 40), TruncationError);
  try {
    make_thermal(100.0, 40);
  } catch (const TruncationError& e) {
    CHECK(e.suggested_dim > 1000);
    CHECK_NOTHROW(make_thermal(100.0, e.suggested_dim));
  }
  CHECK_THROWS_AS(make_thermal(-0.5, 8), std::invalid_argument);
}

TEST_CASE("make_diagonal uniform weights and mean photon m/2") {
  const auto rho = make_diagonal(1, 4);
  CHECK(rho(0, 0).real() == doctest::Approx(0.5));
  CHECK(rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(rho(2, 2).real() == 0.0);
  CHECK(mean_photon(make_diagonal(8, 12)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(make_diagonal(4, 4), TruncationError);
}

TEST_CASE("mix endpoints, affinity, and validation") {
  const auto th = make_thermal(nbar_from_beta(10.0), 16);
  const auto fk = make_fock(10, 16);
  const auto m0 = mix(th, fk, 0.0);
  const auto m1 = mix(th, fk, 1.0);
  for (int n = 0; n < 16; ++n) {
    CHECK(m0(n, n) == th(n, n));
    CHECK(m1(n, n) == fk(n, n));
  }
  const auto mh = mix(th, fk, 0.5);
  CHECK(mh.trace() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mh.max_offdiagonal() == 0.0);

  for (double z : {0.0, 0.25, 0.7, 1.0})
    CHECK(mean_photon(mix(th, fk, z)) ==
          doctest::Approx((1.0 - z) * mean_photon(th) + z * mean_photon(fk)).epsilon(1e-12));

  CHECK_THROWS_AS(mix(th, make_fock(1, 8), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(mix(th, fk, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(mix(th, fk, -0.1), std::invalid_argument);
}

TEST_CASE("linear entropy closed forms: thermal equals diagonal at equal mean photon") {
  CHECK(linear_entropy(make_fock(3, 8)) == doctest::Approx(0.0).epsilon(1e-15));
  const struct {
    double nbar;
    int m;
    int dim;
  } cases[] = {{0.5, 1, 48}, {1.0, 2, 64}, {2.0, 4, 96}, {5.0, 10, 160}};
  for (const auto& c : cases) {
    const double expected = 2.0 * c.nbar / (2.0 * c.nbar + 1.0);
    const double dt = linear_entropy(make_thermal(c.nbar, c.dim));
    const double dd = linear_entropy(make_diagonal(c.m, c.m + 1));
    CHECK(std::fabs(dt - expected) < 1e-9);
    CHECK(std::fabs(dd - expected) < 1e-14);
    CHECK(std::fabs(dt - dd) < 1e-9);
  }
}

TEST_CASE("diagonal entropy: closed forms and entropy ordering") {
  CHECK(entropy_diagonal(make_fock(5, 8)) == 0.0);
  CHECK(entropy_diagonal(make_thermal(1.0, 64)) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-10));
  for (double nbar : {0.5, 1.0, 2.0, 5.0}) {
    const int m = static_cast<int>(std::lround(2.0 * nbar));
    const int dim = std::max(suggested_dim_thermal(nbar) + 32, m + 1);
    const double st = entropy_diagonal(make_thermal(nbar, dim));
    const double sd = entropy_diagonal(make_diagonal(m, dim));
    const double st_formula = (1.0 + nbar) * std::log(1.0 + nbar) - nbar * std::log(nbar);
    CHECK(st == doctest::Approx(st_formula).epsilon(1e-8));
    CHECK(sd == doctest::Approx(std::log(2.0 * nbar + 1.0)).epsilon(1e-12));
    CHECK(st > sd);
  }
  CHECK_THROWS_AS(entropy_diagonal(make_coherent(1.0, 16)), std::invalid_argument);
}

TEST_CASE("fidelity: self-overlap, orthogonality, mixtures") {
  const auto rho = make_thermal(1.0, 32);
  CHECK(fidelity(rho, rho) == 1.0);
  CHECK(fidelity(make_fock(1, 8), make_fock(2, 8)) == 0.0);
  const auto f1 = make_fock(1, 8);
  const auto blend = mix(f1, make_fock(2, 8), 0.25);
  CHECK(fidelity(f1, blend) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK_THROWS_AS(fidelity(make_fock(0, 4), make_fock(0, 8)), std::invalid_argument);
}

TEST_CASE("zmax_scan: degenerate grid, interior maximum, tie-breaking") {
  const std::vector<double> single{0.5};
  CHECK(zmax_scan(10.0, 10, single) == 0.5);

  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[i] = i / 100.0;
  const double zm = zmax_scan(10.0, 10, grid);
  CHECK(zm > 0.0);
  CHECK(zm < 1.0);
  CHECK_NOTHROW(zmax_scan(0.1, 10, grid));

  std::vector<double> bad{0.2, 0.1};
  CHECK_THROWS_AS(zmax_scan(10.0, 10, bad), std::invalid_argument);
  CHECK_THROWS_AS(zmax_scan(10.0, 10, std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("JSON round trip preserves coefficients exactly") {
  const auto rho = mix(make_coherent(complexd(0.7, -0.3), 12), make_thermal(0.2, 12), 0.35);
  const auto back = state_from_json_string(to_json_string(rho));
  REQUIRE(back.dim() == rho.dim());
  for (int n = 0; n < rho.dim(); ++n)
    for (int m = 0; m < rho.dim(); ++m) CHECK(back(n, m) == rho(n, m));
}

TEST_CASE("JSON loader validates structure, hermiticity, and trace") {
  CHECK_THROWS_AS(state_from_json_string("{\"dim\": 2}"), std::invalid_argument);
  CHECK_THROWS_AS(state_from_json_string("{\"dim\": 2, \"coeffs\": [[1,0],[0,0]]}"),
                  std::invalid_argument);
  // non-Hermitian off-diagonal pair
  CHECK_THROWS_AS(
      state_from_json_string(
          "{\"dim\": 2, \"coeffs\": [[0.5,0],[0.5,0],[-0.5,0],[0.5,0]]}"),
      std::invalid_argument);
  // trace far from 1
  CHECK_THROWS_AS(
      state_from_json_string("{\"dim\": 2, \"coeffs\": [[2,0],[0,0],[0,0],[1,0]]}"),
      std::invalid_argument);
  // valid input renormalizes tiny trace drift
  const auto ok = state_from_json_string(
      "{\"dim\": 2, \"coeffs\": [[0.5000001,0],[0,0],[0,0],[0.5,0]]}");
  CHECK(std::fabs(ok.trace() - 1.0) < 1e-12);
}

TEST_CASE("nbar_from_beta matches Bose-Einstein occupancy") {
  CHECK(nbar_from_beta(10.0) == doctest::Approx(1.0 / (std::exp(10.0) - 1.0)).epsilon(1e-14));
  CHECK(nbar_from_beta(0.4) == doctest::Approx(1.0 / (std::exp(0.4) - 1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(nbar_from_beta(0.0), std::domain_error);
}
