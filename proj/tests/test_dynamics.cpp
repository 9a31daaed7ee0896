#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rough/dynamics.hpp"
#include "rough/phasespace.hpp"
#include "rough/roughness.hpp"

using namespace rough;

namespace {

constexpr double kPi = 3.14159265358979323846;

double sup_diff(const PhaseSpaceField& a, const PhaseSpaceField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::fabs(a.values()[i] - b.values()[i]));
  return m;
}

// C-infinity radial window approximating the annulus r^2 in [lo, hi]; smooth
// edges keep the quadrature spectrally accurate while the exact rotation
// invariance of the windowed mass is preserved.
double windowed_mass(const PhaseSpaceField& f, double lo, double hi) {
  const PhaseSpaceGrid& g = f.grid();
  double s = 0.0;
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j) {
      const double r2 = g.q(i) * g.q(i) + g.p(j) * g.p(j);
      const double w = 1.0 / (1.0 + std::exp(-(r2 - lo))) *
                       (1.0 - 1.0 / (1.0 + std::exp(-(r2 - hi))));
      s += w * f(i, j);
    }
  return s * g.dq() * g.dp();
}

}  // namespace

TEST_CASE("kerr evolution: identity at t = 0, diagonal frozen, purity kept") {
  const KerrParams kp{0.4, 0.9};
  const FockDensityMatrix rho = random_density_matrix(77, 6);

  const FockDensityMatrix same = kerr_evolve(rho, kp, 0.0);
  for (int n = 0; n < 6; ++n)
    for (int m = 0; m < 6; ++m) CHECK(same(n, m) == rho(n, m));

  const FockDensityMatrix later = kerr_evolve(rho, kp, 1.7);
  for (int n = 0; n < 6; ++n) {
    CHECK(later(n, n) == rho(n, n));  // photon-number distribution is exact
    for (int m = 0; m < 6; ++m)
      CHECK(std::abs(later(n, m)) ==
            doctest::Approx(std::abs(rho(n, m))).epsilon(1e-14));
  }
  CHECK(purity(later) == doctest::Approx(purity(rho)).epsilon(1e-12));
  CHECK(later.hermiticity_residue() == 0.0);

  const FockDensityMatrix diag = make_thermal(0.5, 24);
  const FockDensityMatrix diag_later = kerr_evolve(diag, kp, 3.3);
  for (int n = 0; n < 24; ++n)
    for (int m = 0; m < 24; ++m) CHECK(diag_later(n, m) == diag(n, m));

  CHECK_THROWS_AS(kerr_evolve(rho, KerrParams{0.0, 0.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kerr_evolve(rho, KerrParams{0.0, -1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("kerr evolution: revival structure of a coherent state") {
  const complexd alpha(2.0, 0.0);
  const int dim = suggested_dim_coherent(alpha);
  const FockDensityMatrix rho0 = make_coherent(alpha, dim);
  const KerrParams kp{0.0, 1.0};

  // twice the revival time: every phase is a multiple of pi, so magnitudes
  // return to their initial values even though signs may differ
  const FockDensityMatrix half = kerr_evolve(rho0, kp, kPi / kp.lambda);
  double mag_drift = 0.0;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m)
      mag_drift = std::max(mag_drift,
                           std::fabs(std::abs(half(n, m)) - std::abs(rho0(n, m))));
  CHECK(mag_drift < 1e-9);

  // full period: phases are multiples of 2 pi and the state itself returns
  const FockDensityMatrix full = kerr_evolve(rho0, kp, 2.0 * kPi / kp.lambda);
  double drift = 0.0;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m)
      drift = std::max(drift, std::abs(full(n, m) - rho0(n, m)));
  CHECK(drift < 1e-9);
}

TEST_CASE("classical distribution: initial form, normalization, annuli") {
  const complexd alpha(2.0, 0.0);
  const KerrParams kp{0.0, 1.0};
  const PhaseSpaceGrid grid = auto_grid(0.0, 2.0);

  const PhaseSpaceField f0 = classical_liouville_field(alpha, kp, 0.0, grid);
  CHECK(f0.kind() == FieldKind::classical);
  double sup = 0.0;
  for (int i = 0; i < grid.nq; ++i)
    for (int j = 0; j < grid.np; ++j) {
      const complexd beta(grid.q(i) / std::sqrt(2.0), grid.p(j) / std::sqrt(2.0));
      sup = std::max(sup, std::fabs(f0(i, j) -
                                    std::exp(-std::norm(beta - alpha)) / (2.0 * kPi)));
    }
  CHECK(sup < 1e-15);

  // rotation at a radius-dependent rate conserves total and per-annulus mass;
  // the default spacing resolves the whorl up to t ~ 0.8 at this amplitude
  const double m0 = windowed_mass(f0, 4.0, 16.0);
  for (double t : {0.4, 0.8}) {
    const PhaseSpaceField ft = classical_liouville_field(alpha, kp, t, grid);
    CHECK(trapezoid_integral(ft) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::fabs(windowed_mass(ft, 4.0, 16.0) - m0) < 1e-6);
  }
  // longer times need a finer grid: the angular wavelength shrinks as t grows
  const PhaseSpaceGrid fine = auto_grid(0.0, 2.0, 0.02);
  const double fine_m0 =
      windowed_mass(classical_liouville_field(alpha, kp, 0.0, fine), 4.0, 16.0);
  const PhaseSpaceField late = classical_liouville_field(alpha, kp, 1.5, fine);
  CHECK(trapezoid_integral(late) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::fabs(windowed_mass(late, 4.0, 16.0) - fine_m0) < 1e-6);
}

TEST_CASE("kerr husimi series: initial state, term budget, normalization") {
  const complexd alpha(2.0, 0.0);
  const KerrParams kp{0.0, 1.0};
  const PhaseSpaceGrid grid = auto_grid(0.0, 2.0);
  const int n_terms = kerr_husimi_terms(alpha);
  CHECK(n_terms > 4);

  const PhaseSpaceField q0 = kerr_husimi_field(alpha, kp, 0.0, grid, n_terms);
  CHECK(q0.kind() == FieldKind::husimi);
  // the truncation policy bounds dropped *mass*; matching the series route in
  // sup norm needs the dropped *amplitudes* small too, hence the extra levels
  const FockDensityMatrix rho0 = make_coherent(alpha, suggested_dim_coherent(alpha) + 14);
  CHECK(sup_diff(q0, husimi_field(rho0, grid)) < 1e-8);
  CHECK(trapezoid_integral(q0) == doctest::Approx(1.0).epsilon(1e-6));

  const PhaseSpaceField qt = kerr_husimi_field(alpha, kp, 0.7, grid, n_terms);
  CHECK(trapezoid_integral(qt) == doctest::Approx(1.0).epsilon(1e-6));
  for (double v : qt.values()) CHECK(v >= 0.0);

  CHECK_THROWS_AS(kerr_husimi_field(alpha, kp, 0.0, grid, 3), std::invalid_argument);
  CHECK_THROWS_AS(kerr_husimi_field(alpha, kp, 0.0, grid, 0), std::invalid_argument);
}

TEST_CASE("kerr husimi series agrees with the density-matrix route") {
  const KerrParams plain{0.0, 1.0};
  const KerrParams detuned{0.7, 1.0};  // nonzero linear frequency regression
  const PhaseSpaceGrid grid = auto_grid(0.0, 2.0, 0.1);
  for (const KerrParams& kp : {plain, detuned}) {
    for (const complexd alpha : {complexd(2.0, 0.0), complexd(0.9, -0.6)}) {
      const int dim = suggested_dim_coherent(alpha) + 14;
      const FockDensityMatrix rho0 = make_coherent(alpha, dim);
      const int n_terms = kerr_husimi_terms(alpha);
      for (double t : {0.3, kPi / 4.0, 2.9}) {
        const PhaseSpaceField direct = kerr_husimi_field(alpha, kp, t, grid, n_terms);
        const PhaseSpaceField via_rho = husimi_field(kerr_evolve(rho0, kp, t), grid);
        CHECK(sup_diff(direct, via_rho) < 1e-8);
      }
    }
  }
}

TEST_CASE("dynamic distance: zero at start, input validation") {
  const complexd alpha(2.0, 0.0);
  const KerrParams kp{0.0, 1.0};
  const PhaseSpaceGrid grid = auto_grid(0.0, 2.0);
  const int n_terms = kerr_husimi_terms(alpha);

  const PhaseSpaceField f0 = classical_liouville_field(alpha, kp, 0.0, grid);
  const PhaseSpaceField q0 = kerr_husimi_field(alpha, kp, 0.0, grid, n_terms);
  CHECK(ddm(f0, q0) < 1e-8);

  // bit-identical values => exactly zero distance
  PhaseSpaceField copy(grid, FieldKind::classical);
  for (int i = 0; i < grid.nq; ++i)
    for (int j = 0; j < grid.np; ++j) copy(i, j) = q0(i, j);
  CHECK(ddm(copy, q0) == 0.0);

  // distance grows once the whorl deforms the classical distribution
  const double t = 0.5;
  const double d = ddm(classical_liouville_field(alpha, kp, t, grid),
                       kerr_husimi_field(alpha, kp, t, grid, n_terms));
  CHECK(d > 0.01);
  CHECK(d <= 1.0 + 1e-6);

  CHECK_THROWS_AS(ddm(q0, q0), std::invalid_argument);  // kinds must differ
  const PhaseSpaceGrid other = auto_grid(0.0, 2.0, 0.1);
  CHECK_THROWS_AS(ddm(classical_liouville_field(alpha, kp, 0.0, other), q0),
                  std::invalid_argument);
  const PhaseSpaceGrid tight(-2.0, 2.0, -2.0, 2.0, 16, 16);
  CHECK_THROWS_AS(ddm(classical_liouville_field(alpha, kp, 0.0, tight),
                      kerr_husimi_field(alpha, kp, 0.0, tight, n_terms)),
                  std::invalid_argument);
}

TEST_CASE("trajectory: initial record, growth, bounds, CSV shape") {
  const complexd alpha(2.0, 0.0);
  const KerrParams kp{0.0, 1.0};
  const PhaseSpaceGrid grid = auto_grid(0.0, 2.0, 0.1);
  const int dim = suggested_dim_coherent(alpha);
  const std::vector<double> times{0.0, 0.2, 0.5, kPi / 4.0};

  const std::vector<TrajectoryRecord> records = trajectory(alpha, kp, times, grid, dim);
  REQUIRE(records.size() == times.size());
  CHECK(records[0].t == 0.0);
  CHECK(records[0].roughness ==
        doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-4));
  CHECK(records[0].ddm < 1e-6);
  for (const TrajectoryRecord& rec : records) {
    CHECK(rec.roughness >= 0.0);
    CHECK(rec.roughness <= 1.0 + 1e-9);
    CHECK(rec.ddm >= 0.0);
    CHECK(rec.ddm <= 1.0 + 1e-6);
  }
  // growth phase: R climbs from the coherent floor toward saturation
  CHECK(records[1].roughness > records[0].roughness);
  CHECK(records[3].roughness > records[1].roughness);
  CHECK(records[3].ddm > records[1].ddm);

  const std::string csv = trajectory_to_csv(records, "alpha=2 omega=0 lambda=1");
  CHECK(csv.rfind("# alpha=2 omega=0 lambda=1\nt,R,D\n0,", 0) == 0);
  CHECK(csv == trajectory_to_csv(records, "alpha=2 omega=0 lambda=1"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 4);

  // amplified nonlinearity response: the larger amplitude separates faster
  const std::vector<double> probe{0.3};
  const double d_small =
      trajectory(complexd(0.3, 0.0), kp, probe, grid, 12)[0].ddm;
  const double d_large = trajectory(alpha, kp, probe, grid, dim)[0].ddm;
  CHECK(d_large > d_small);
}
