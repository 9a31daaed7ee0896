// Acceptance gate: thirteen end-to-end criteria, each printed as a single
// PASS/FAIL line.  Every tolerance is pinned here; the binary exits nonzero
// if any criterion fails, so ctest treats the gate as one test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rough/dynamics.hpp"
#include "rough/phasespace.hpp"
#include "rough/roughness.hpp"
#include "rough/specfun.hpp"
#include "rough/spectral.hpp"
#include "rough/states.hpp"

namespace {

using namespace rough;
using Clock = std::chrono::steady_clock;

constexpr double kPi = 3.14159265358979323846;
const double kVacuumR = 1.0 / std::sqrt(6.0);

struct Outcome {
  bool ok = false;
  std::string detail;
};

Outcome pass(std::string detail = "") { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

double elapsed_s(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double sup_diff(const PhaseSpaceField& a, const PhaseSpaceField& b) {
  double sup = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    sup = std::max(sup, std::fabs(a.values()[i] - b.values()[i]));
  return sup;
}

bool nondecreasing(const std::vector<double>& v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] - slack) return false;
  return true;
}

bool nonincreasing(const std::vector<double>& v, double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + slack) return false;
  return true;
}

Outcome criterion_coherent() {
  const auto start = Clock::now();
  const double r = roughness_numeric(AnalyticStateSpec(Coherent{0.9, -1.1}));
  const double dt = elapsed_s(start);
  if (std::fabs(r - kVacuumR) > 1e-6)
    return fail("R = " + fmt(r) + ", expected " + fmt(kVacuumR) + " +/- 1e-6");
  if (dt >= 1.0) return fail("runtime " + fmt(dt) + " s exceeds 1 s");
  return pass("R = " + fmt(r) + ", " + fmt(dt) + " s");
}

Outcome criterion_fock_closed_forms() {
  const auto start = Clock::now();
  double prev_r = -1.0;
  for (int n = 0; n <= 40; ++n) {
    // fock_cross_term itself runs three independent integer routes and
    // throws on any disagreement beyond 1e-9 relative; tie it here to the
    // fourth (scaled-binomial ratio) form as an observable re-check.
    const double cross = fock_cross_term(n);
    const double ratio_form = (4.0 / 3.0) * specfun::central_binom_scaled(n) *
                              specfun::bn_ratio(n);
    if (std::fabs(cross - ratio_form) > 1e-9 * ratio_form)
      return fail("cross-term routes disagree at n = " + std::to_string(n));
    const RoughnessBreakdown b = roughness_fock(n);
    if (b.r2_w2 != 1.0) return fail("r2_w2 != 1 at n = " + std::to_string(n));
    if (!(b.r2_q2 > 0.0 && b.r2_q2 < b.r2_wq))
      return fail("ordering 0 < r2_q2 < r2_wq broken at n = " + std::to_string(n));
    if (!(b.r > prev_r)) return fail("R not increasing at n = " + std::to_string(n));
    prev_r = b.r;
  }
  const double dt = elapsed_s(start);
  if (dt >= 5.0) return fail("runtime " + fmt(dt) + " s exceeds 5 s");
  return pass("R(40) = " + fmt(prev_r) + ", " + fmt(dt) + " s");
}

Outcome criterion_fock_limit() {
  const double r = roughness_fock(200).r;
  if (r > 0.95 && r < 1.0) return pass("R(200) = " + fmt(r));
  return fail("R(200) = " + fmt(r) + " outside (0.95, 1)");
}

Outcome criterion_squeezed() {
  if (std::fabs(roughness_squeezed(0.0) - kVacuumR) > 1e-12)
    return fail("R(0) off by more than 1e-12");
  for (double zeta : {0.5, 1.0, 2.0, 7.5})
    if (roughness_squeezed(zeta) != roughness_squeezed(-zeta))
      return fail("R(zeta) != R(-zeta) at zeta = " + fmt(zeta));
  if (std::fabs(roughness_squeezed(12.0) - 1.0) > 1e-3)
    return fail("R(12) = " + fmt(roughness_squeezed(12.0)));
  for (double zeta : {0.5, 1.0, 2.0}) {
    const AnalyticStateSpec spec{Squeezed{zeta}};
    const PhaseSpaceField w = analytic_field(spec, FieldKind::wigner, auto_grid_for(spec));
    const double via_spectral = spectral_roughness(w);
    if (std::fabs(via_spectral - roughness_squeezed(zeta)) > 1e-6)
      return fail("spectral route off at zeta = " + fmt(zeta));
  }
  return pass("closed form, parity, limit, and spectral route agree");
}

Outcome criterion_cat() {
  if (std::fabs(roughness_cat(0.0, CatParity::even) - kVacuumR) > 1e-12)
    return fail("R+(0) != 1/sqrt(6)");
  const double plateau = std::sqrt(7.0 / 12.0);
  for (CatParity parity : {CatParity::even, CatParity::odd})
    if (std::fabs(roughness_cat(10.0, parity) - plateau) > 1e-6)
      return fail("wide-separation plateau missed");
  for (double q0 : {0.5, 1.0, 2.0, 4.0})
    if (!(roughness_cat(q0, CatParity::odd) > roughness_cat(q0, CatParity::even)))
      return fail("odd not above even at q0 = " + fmt(q0));
  return pass("plateau = " + fmt(plateau) + ", odd > even on the test set");
}

Outcome criterion_thermal() {
  for (double nbar : {0.25, 1.0, 4.0}) {
    const double closed = roughness_thermal(nbar);
    const int dim = suggested_dim_thermal(nbar);
    const IntegralTensorCache cache = build_tensor_cache(dim);
    const double assembled = roughness_general(make_thermal(nbar, dim), cache).r;
    if (std::fabs(assembled - closed) > 1e-6)
      return fail("assembly off at nbar = " + fmt(nbar));
    const double numeric = roughness_numeric(AnalyticStateSpec(Thermal{nbar}));
    if (std::fabs(numeric - closed) > 1e-6)
      return fail("quadrature off at nbar = " + fmt(nbar));
  }
  return pass("closed form matches assembly and quadrature at nbar = 0.25, 1, 4");
}

Outcome criterion_entropy() {
  const struct {
    double nbar;
    int m;
    int dim;
  } cases[] = {{0.5, 1, 48}, {1.0, 2, 64}, {2.0, 4, 96}, {5.0, 10, 160}};
  for (const auto& c : cases) {
    const double lt = linear_entropy(make_thermal(c.nbar, c.dim));
    const double ld = linear_entropy(make_diagonal(c.m, c.m + 1));
    if (std::fabs(lt - ld) > 1e-9)
      return fail("linear entropies differ at nbar = " + fmt(c.nbar));
  }
  for (double nbar : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double st = (nbar + 1.0) * std::log(nbar + 1.0) - nbar * std::log(nbar);
    const double sd = std::log(2.0 * nbar + 1.0);
    if (!(st > sd)) return fail("S_T <= S_D at nbar = " + fmt(nbar));
  }
  return pass("equal linear entropy to 1e-9; S_T > S_D throughout");
}

Outcome criterion_negativity() {
  for (const AnalyticStateSpec& spec :
       {AnalyticStateSpec(Coherent{1.2, 0.3}), AnalyticStateSpec(Squeezed{1.0}),
        AnalyticStateSpec(Thermal{1.0})}) {
    const PhaseSpaceField w = analytic_field(spec, FieldKind::wigner, auto_grid_for(spec));
    if (std::fabs(negativity(w)) > 1e-8) return fail("gaussian negativity nonzero");
  }
  const double n1 =
      negativity(wigner_field(make_fock(1, 4), symmetric_grid(8.0, 0.01)));
  const double exact = 4.0 * std::exp(-0.5) - 2.0;
  if (std::fabs(n1 - exact) > 1e-6)
    return fail("N(fock 1) = " + fmt(n1) + ", expected " + fmt(exact));
  const PhaseSpaceGrid grid(-20.0, 20.0, -20.0, 20.0, 256, 256);
  for (double beta : {0.4, 10.0}) {
    double prev = -1e-8;
    for (double z : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double n = negativity(wigner_field(make_mixture({beta, 10, z}, 64), grid));
      if (n < prev - 1e-8)
        return fail("N not monotone at beta = " + fmt(beta) + ", z = " + fmt(z));
      prev = n;
    }
  }
  return pass("N(fock 1) = " + fmt(n1) + "; gaussian zeros; mixture monotone");
}

Outcome criterion_mixture_study() {
  const auto start = Clock::now();
  const int dim = 64;
  const int M = 10;
  const IntegralTensorCache cache = build_tensor_cache(dim);
  const PhaseSpaceGrid grid(-20.0, 20.0, -20.0, 20.0, 256, 256);

  const double r_cold0 = roughness_general(make_mixture({10.0, M, 0.0}, dim), cache).r;
  bool dipped = false;
  for (double z : {0.05, 0.1, 0.15, 0.2, 0.25})
    if (roughness_general(make_mixture({10.0, M, z}, dim), cache).r < r_cold0)
      dipped = true;
  if (!dipped) return fail("no dip below R(0) inside (0, 0.3) at beta = 10");
  if (!(roughness_general(make_mixture({10.0, M, 1.0}, dim), cache).r > r_cold0))
    return fail("R(1) not above R(0) at beta = 10");

  std::vector<double> z_grid;
  for (int i = 0; i <= 10; ++i) z_grid.push_back(0.1 * i);

  std::vector<double> r_hot;
  for (double z : z_grid)
    r_hot.push_back(roughness_general(make_mixture({0.4, M, z}, dim), cache).r);
  for (std::size_t i = 1; i < r_hot.size(); ++i)
    if (!(r_hot[i] > r_hot[i - 1]))
      return fail("R not monotone increasing at beta = 0.4");

  std::vector<double> dr, dn, one_minus_f;
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    const FockDensityMatrix hot = make_mixture({0.4, M, z_grid[i]}, dim);
    const FockDensityMatrix cold = make_mixture({10.0, M, z_grid[i]}, dim);
    dr.push_back(r_hot[i] - roughness_general(cold, cache).r);
    dn.push_back(negativity(wigner_field(hot, grid)) -
                 negativity(wigner_field(cold, grid)));
    one_minus_f.push_back(1.0 - fidelity(cold, hot));
  }
  if (!nondecreasing(dr, 1e-12)) return fail("dR not monotone");
  if (nondecreasing(dn, 1e-12) || nonincreasing(dn, 1e-12))
    return fail("dN unexpectedly monotone");
  if (!nonincreasing(one_minus_f, 1e-12) || one_minus_f.back() < -1e-12)
    return fail("1 - F not monotone decreasing to zero");
  if (std::fabs(dr.back()) > 1e-8 || std::fabs(dn.back()) > 1e-8)
    return fail("z = 1 differences not zero");
  const double dr0_closed =
      roughness_thermal(nbar_from_beta(0.4)) - roughness_thermal(nbar_from_beta(10.0));
  if (std::fabs(dr.front() - dr0_closed) > 1e-6)
    return fail("z = 0 difference off the thermal closed forms");

  const double dt = elapsed_s(start);
  if (dt >= 120.0) return fail("runtime " + fmt(dt) + " s exceeds 2 min");
  return pass("dip, monotonicity, and difference shapes hold, " + fmt(dt) + " s");
}

Outcome criterion_bounds() {
  const IntegralTensorCache cache = build_tensor_cache(11);
  const auto in_bounds = [](const RoughnessBreakdown& b) {
    return b.r >= 0.0 && b.r <= 1.0 + 1e-9 && b.r2_wq >= 0.0;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 7;
    if (!in_bounds(roughness_general(random_density_matrix(4200 + trial, dim), cache)))
      return fail("random state " + std::to_string(trial) + " out of bounds");
  }
  for (int n = 0; n <= 60; ++n)
    if (!in_bounds(roughness_fock(n))) return fail("fock " + std::to_string(n));
  for (double zeta = -4.0; zeta <= 4.0; zeta += 0.25) {
    const double r = roughness_squeezed(zeta);
    if (!(r >= 0.0 && r <= 1.0 + 1e-9)) return fail("squeezed " + fmt(zeta));
  }
  for (double q0 = 0.25; q0 <= 6.0; q0 += 0.25)
    for (CatParity parity : {CatParity::even, CatParity::odd}) {
      const double r = roughness_cat(q0, parity);
      if (!(r >= 0.0 && r <= 1.0 + 1e-9)) return fail("cat " + fmt(q0));
    }
  for (double nbar = 0.0; nbar <= 20.0; nbar += 0.5) {
    const double r = roughness_thermal(nbar);
    if (!(r >= 0.0 && r <= 1.0 + 1e-9)) return fail("thermal " + fmt(nbar));
  }
  for (int m = 0; m <= 10; ++m)
    if (!in_bounds(roughness_general(make_diagonal(m, m + 1), cache)))
      return fail("diagonal " + std::to_string(m));
  return pass("50 random states and every family state in bounds");
}

Outcome criterion_identities() {
  using specfun::BigUInt;
  for (int n = 0; n <= 30; ++n)
    for (int j = 0; j <= n; ++j)
      if (specfun::stirling_identity_lhs(n, j) !=
          BigUInt::factorial(n - j) * BigUInt::binomial(n, j) * BigUInt::binomial(n, j))
        return fail("convolution identity broken at (" + std::to_string(n) + ", " +
                    std::to_string(j) + ")");
  for (int n = 1; n <= 100; ++n) {
    const double value = specfun::central_binom_scaled(n);
    if (!(std::exp(-1.0 / (6.0 * n)) / std::sqrt(kPi * n) <= value &&
          value <= std::exp(1.0 / (24.0 * n)) / std::sqrt(kPi * n)))
      return fail("central-binomial bound broken at n = " + std::to_string(n));
  }
  if (specfun::bn_ratio(0) != 1.0) return fail("B_0 != 1");
  if (specfun::bn_ratio(1) != 10.0 / 9.0) return fail("B_1 != 10/9");
  double prev = specfun::bn_ratio(1);
  for (int n = 2; n <= 100; ++n) {
    const double b = specfun::bn_ratio(n);
    if (!(b > 1.0 && b < prev)) return fail("B_n not monotone in (1, 10/9]");
    prev = b;
  }
  return pass("exact for n <= 30, bounds to n = 100, ratio monotone");
}

Outcome criterion_dynamics() {
  const auto start = Clock::now();
  const KerrParams params{0.0, 1.0};
  std::vector<double> times;
  for (int i = 0; i < 100; ++i) times.push_back(1.2 * i / 99.0);

  std::vector<std::vector<TrajectoryRecord>> runs;
  for (double a : {0.3, 2.0}) {
    const complexd alpha(a, 0.0);
    const double extent = std::max(6.0, 2.0 * (std::sqrt(2.0) * a + 5.0));
    const PhaseSpaceGrid grid(-extent, extent, -extent, extent, 256, 256);
    runs.push_back(trajectory(alpha, params, times, grid, suggested_dim_coherent(alpha)));
    const auto& records = runs.back();
    if (std::fabs(records.front().roughness - kVacuumR) > 1e-4)
      return fail("R(0) off at alpha = " + fmt(a));
    if (records.front().ddm > 1e-6) return fail("D(0) nonzero at alpha = " + fmt(a));
    for (const TrajectoryRecord& rec : records)
      if (rec.roughness > 1.0 + 1e-9) return fail("R exceeds 1 at alpha = " + fmt(a));
  }

  double r_max = 0.0;
  for (const TrajectoryRecord& rec : runs[1]) r_max = std::max(r_max, rec.roughness);
  double t_sat = -1.0;
  for (const TrajectoryRecord& rec : runs[1])
    if (rec.roughness >= 0.95 * r_max) {
      t_sat = rec.t;
      break;
    }
  if (t_sat < 0.0 || t_sat > 1.5 * kPi / 4.0)
    return fail("saturation at t = " + fmt(t_sat) + " misses 1.5 pi/4");

  int growth_points = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.2 || times[i] > 0.6) continue;
    ++growth_points;
    if (!(runs[1][i].ddm > runs[0][i].ddm))
      return fail("D(alpha = 2) not above D(alpha = 0.3) at t = " + fmt(times[i]));
  }
  if (growth_points == 0) return fail("empty growth-phase sample");

  const double dt = elapsed_s(start);
  if (dt >= 300.0) return fail("runtime " + fmt(dt) + " s exceeds 5 min");
  return pass("saturation at t = " + fmt(t_sat) + ", " + fmt(dt) + " s");
}

Outcome criterion_two_route() {
  for (double zeta : {0.5, 1.0, 2.0}) {
    const AnalyticStateSpec spec{Squeezed{zeta}};
    const PhaseSpaceField w = analytic_field(spec, FieldKind::wigner, auto_grid_for(spec));
    const double numeric = roughness_numeric(w, smooth_to_husimi(w));
    const double spectral = spectral_roughness(w);
    if (std::fabs(spectral - numeric) > 1e-6 * numeric)
      return fail("spectral vs quadrature off at zeta = " + fmt(zeta));
  }
  for (int trial = 0; trial < 3; ++trial) {
    const FockDensityMatrix rho = random_density_matrix(7100 + trial, 2 + 2 * trial);
    const PhaseSpaceField w = wigner_field(rho, auto_grid_for(rho, 0.1));
    const double numeric = roughness_numeric(w, smooth_to_husimi(w));
    const double spectral = spectral_roughness(w);
    if (std::fabs(spectral - numeric) > 1e-6 * numeric)
      return fail("spectral vs quadrature off on random state " + std::to_string(trial));
  }

  const PhaseSpaceGrid named_grid = symmetric_grid(12.0, 0.05);
  const struct {
    FockDensityMatrix rho;
    double tol;
  } smoothing_cases[] = {{make_fock(0, 2), 1e-8},
                         {make_fock(3, 6), 1e-6},
                         {make_thermal(1.0, suggested_dim_thermal(1.0)), 1e-8}};
  for (const auto& c : smoothing_cases)
    if (sup_diff(husimi_field(c.rho, named_grid),
                 smooth_to_husimi(wigner_field(c.rho, named_grid))) > c.tol)
      return fail("smoothing route off on a named state");
  const PhaseSpaceGrid wide_grid = symmetric_grid(16.0, 0.05);
  for (int trial = 0; trial < 3; ++trial) {
    const FockDensityMatrix rho = random_density_matrix(8200 + trial, 12);
    if (sup_diff(husimi_field(rho, wide_grid),
                 smooth_to_husimi(wigner_field(rho, wide_grid))) > 1e-6)
      return fail("smoothing route off on random state " + std::to_string(trial));
  }

  for (const complexd alpha : {complexd(2.0, 0.0), complexd(0.9, -0.6)}) {
    const PhaseSpaceGrid grid = auto_grid(0.0, std::abs(alpha), 0.1);
    const FockDensityMatrix rho0 =
        make_coherent(alpha, suggested_dim_coherent(alpha) + 14);
    for (const KerrParams params : {KerrParams{0.0, 1.0}, KerrParams{0.7, 1.0}})
      for (double t : {0.3, 2.9}) {
        const PhaseSpaceField direct =
            kerr_husimi_field(alpha, params, t, grid, kerr_husimi_terms(alpha));
        const PhaseSpaceField via = husimi_field(kerr_evolve(rho0, params, t), grid);
        if (sup_diff(direct, via) > 1e-8)
          return fail("kerr routes off at t = " + fmt(t));
      }
  }
  return pass("spectral, smoothing, and kerr route pairs agree");
}

}  // namespace

int main() {
  const struct {
    int index;
    const char* title;
    std::function<Outcome()> body;
  } criteria[] = {
      {1, "coherent-state roughness on an auto grid", criterion_coherent},
      {2, "fock closed forms, cross-term routes, ordering", criterion_fock_closed_forms},
      {3, "fock n = 200 roughness inside (0.95, 1)", criterion_fock_limit},
      {4, "squeezed closed form, parity, limit, spectral route", criterion_squeezed},
      {5, "cat parities: vacuum limit, plateau, ordering", criterion_cat},
      {6, "thermal closed form vs assembly and quadrature", criterion_thermal},
      {7, "entropy equalities and ordering", criterion_entropy},
      {8, "negativity: gaussian zeros, fock oracle, monotone mixture", criterion_negativity},
      {9, "mixture study: dip, monotonicity, difference shapes", criterion_mixture_study},
      {10, "roughness bounds on random and family states", criterion_bounds},
      {11, "combinatorial identities and bounds", criterion_identities},
      {12, "kerr trajectories: start, bounds, saturation, growth", criterion_dynamics},
      {13, "two-route consistency: spectral, smoothing, kerr", criterion_two_route},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    if (!outcome.ok) ++failures;
    std::printf("%s criterion %d: %s%s%s%s\n", outcome.ok ? "PASS" : "FAIL",
                c.index, c.title, outcome.detail.empty() ? "" : " (",
                outcome.detail.c_str(), outcome.detail.empty() ? "" : ")");
  }
  if (failures > 0) std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
