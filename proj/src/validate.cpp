#include "rough/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "internal_util.hpp"
#include "rough/dynamics.hpp"
#include "rough/phasespace.hpp"
#include "rough/roughness.hpp"
#include "rough/specfun.hpp"
#include "rough/spectral.hpp"
#include "rough/states.hpp"

namespace rough {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kVacuumR = 1.0 / std::sqrt(6.0);

struct CheckResult {
  bool ok = false;
  std::string detail;
};

CheckResult pass(std::string detail = "") { return {true, std::move(detail)}; }
CheckResult fail(std::string detail) { return {false, std::move(detail)}; }

CheckResult expect_near(double value, double expected, double tol,
                        const std::string& label) {
  if (std::fabs(value - expected) <= tol) return pass();
  std::ostringstream os;
  os << label << ": got " << value << ", expected " << expected << " +/- " << tol;
  return fail(os.str());
}

class Runner {
 public:
  void add(const std::string& name, const std::function<CheckResult()>& body) {
    ValidationCheck check;
    check.name = name;
    try {
      const CheckResult result = body();
      check.passed = result.ok;
      check.detail = result.detail;
    } catch (const std::exception& e) {
      check.passed = false;
      check.detail = std::string("exception: ") + e.what();
    }
    report_.checks.push_back(std::move(check));
  }

  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

FockDensityMatrix random_pure_state(std::uint64_t seed, int dim) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<complexd> c(static_cast<std::size_t>(dim));
  double norm2 = 0.0;
  for (auto& v : c) {
    v = complexd(u(gen), u(gen));
    norm2 += std::norm(v);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : c) v *= inv;
  FockDensityMatrix rho(dim);
  for (int n = 0; n < dim; ++n)
    for (int m = n; m < dim; ++m) {
      complexd v = c[n] * std::conj(c[m]);
      if (n == m) v = complexd(std::norm(c[n]), 0.0);
      rho.set_hermitian_pair(n, m, v);
    }
  return rho;
}

void add_quick_checks(Runner& runner) {
  runner.add("coherent state quadrature roughness = 1/sqrt(6)", [] {
    const double r = roughness_numeric(AnalyticStateSpec(Coherent{1.2, -0.4}));
    return expect_near(r, kVacuumR, 1e-6, "R");
  });

  runner.add("fock cross term: three integer routes agree for n <= 40", [] {
    for (int n = 0; n <= 40; ++n) {
      if (!(fock_cross_term(n) > 0.0)) return fail("non-positive cross term");
    }
    return pass();
  });

  runner.add("fock cross term ties the exact ratio form for n <= 40", [] {
    for (int n = 0; n <= 40; ++n) {
      const double expected = (4.0 / 3.0) * specfun::central_binom_scaled(n) *
                              specfun::bn_ratio(n);
      const double got = fock_cross_term(n);
      if (std::fabs(got - expected) > 1e-12 * expected) {
        return fail("mismatch at n = " + std::to_string(n));
      }
    }
    return pass();
  });

  runner.add("fock pieces ordered: 0 < husimi purity < cross overlap", [] {
    for (int n = 0; n <= 40; ++n) {
      const RoughnessBreakdown b = roughness_fock(n);
      if (b.r2_w2 != 1.0) return fail("wigner purity != 1 at n = " + std::to_string(n));
      if (!(b.r2_q2 > 0.0 && b.r2_q2 < b.r2_wq)) {
        return fail("ordering broken at n = " + std::to_string(n));
      }
    }
    return pass();
  });

  runner.add("fock roughness strictly increasing for n <= 40", [] {
    double prev = -1.0;
    for (int n = 0; n <= 40; ++n) {
      const double r = roughness_fock(n).r;
      if (!(r > prev)) return fail("not increasing at n = " + std::to_string(n));
      prev = r;
    }
    return pass();
  });

  runner.add("fock n = 200 sits in the slow-approach window (0.95, 1)", [] {
    const double r = roughness_fock(200).r;
    if (r > 0.95 && r < 1.0) return pass();
    return fail("R(200) = " + std::to_string(r));
  });

  runner.add("squeezed roughness: vacuum value and exact parity", [] {
    const CheckResult base = expect_near(roughness_squeezed(0.0), kVacuumR, 1e-12, "R(0)");
    if (!base.ok) return base;
    for (double z : {0.5, 1.0, 2.0, 5.0}) {
      if (roughness_squeezed(z) != roughness_squeezed(-z)) {
        return fail("asymmetric at zeta = " + std::to_string(z));
      }
    }
    return pass();
  });

  runner.add("squeezed roughness saturates: |R(12) - 1| < 1e-3", [] {
    return expect_near(roughness_squeezed(12.0), 1.0, 1e-3, "R(12)");
  });

  runner.add("squeezed closed form vs spectral transform at zeta = 0.5", [] {
    const Squeezed s{0.5};
    const PhaseSpaceField w = analytic_field(s, FieldKind::wigner, auto_grid_for(s));
    return expect_near(spectral_roughness(w), roughness_squeezed(0.5), 1e-6, "R");
  });

  runner.add("cat states: even vacuum limit and wide-separation plateau", [] {
    const CheckResult base =
        expect_near(roughness_cat(0.0, CatParity::even), kVacuumR, 1e-12, "R+(0)");
    if (!base.ok) return base;
    const double plateau = std::sqrt(7.0 / 12.0);
    const CheckResult even =
        expect_near(roughness_cat(10.0, CatParity::even), plateau, 1e-6, "R+(10)");
    if (!even.ok) return even;
    return expect_near(roughness_cat(10.0, CatParity::odd), plateau, 1e-6, "R-(10)");
  });

  runner.add("cat states: odd superposition rougher than even", [] {
    for (double q0 : {0.5, 1.0, 2.0, 4.0}) {
      if (!(roughness_cat(q0, CatParity::odd) > roughness_cat(q0, CatParity::even))) {
        return fail("ordering broken at q0 = " + std::to_string(q0));
      }
    }
    return pass();
  });

  runner.add("thermal closed form vs fock-basis assembly", [] {
    for (double nbar : {0.25, 1.0, 4.0}) {
      const int dim = suggested_dim_thermal(nbar);
      const IntegralTensorCache cache = build_tensor_cache(dim);
      const double r = roughness_general(make_thermal(nbar, dim), cache).r;
      const CheckResult c = expect_near(r, roughness_thermal(nbar), 1e-6,
                                        "nbar = " + std::to_string(nbar));
      if (!c.ok) return c;
    }
    return pass();
  });

  runner.add("thermal closed form vs quadrature on analytic fields", [] {
    return expect_near(roughness_numeric(AnalyticStateSpec(Thermal{1.0})),
                       roughness_thermal(1.0), 1e-6, "R");
  });

  runner.add("thermal tail exponent: R^2 * 16 nbar^3 -> 1", [] {
    const double nbar = 1000.0;
    const double scaled = roughness_thermal(nbar) * roughness_thermal(nbar) *
                          16.0 * nbar * nbar * nbar;
    if (scaled > 0.99 && scaled <= 1.0) return pass();
    return fail("scaled limit = " + std::to_string(scaled));
  });

  runner.add("linear entropy equal for thermal and uniform at same occupancy", [] {
    for (double nbar : {0.5, 1.0, 2.0, 5.0}) {
      const int m = static_cast<int>(std::lround(2.0 * nbar));
      // 32 m gives the geometric tail enough headroom for the 1e-9 equality.
      const double lt = linear_entropy(make_thermal(nbar, 32 * (m + 1)));
      const double ld = linear_entropy(make_diagonal(m, m + 1));
      if (std::fabs(lt - ld) > 1e-9) return fail("nbar = " + std::to_string(nbar));
    }
    return pass();
  });

  runner.add("von neumann entropy: thermal above uniform at same occupancy", [] {
    for (double nbar : {0.5, 1.0, 2.0, 5.0}) {
      const double st = (nbar + 1.0) * std::log(nbar + 1.0) - nbar * std::log(nbar);
      const double sd = std::log(2.0 * nbar + 1.0);
      if (!(st > sd)) return fail("ordering broken at nbar = " + std::to_string(nbar));
    }
    return pass();
  });

  runner.add("negativity vanishes for gaussian families", [] {
    for (const AnalyticStateSpec& spec :
         {AnalyticStateSpec(Coherent{1.4, 0.0}), AnalyticStateSpec(Squeezed{1.0}),
          AnalyticStateSpec(Thermal{1.0})}) {
      const PhaseSpaceField w = analytic_field(spec, FieldKind::wigner, auto_grid_for(spec));
      const double n = negativity(w);
      if (std::fabs(n) > 1e-8) return fail("gaussian negativity " + std::to_string(n));
    }
    return pass();
  });

  runner.add("negativity of the first excited state vs radial closed form", [] {
    const PhaseSpaceGrid grid = symmetric_grid(8.0, 0.01);
    const PhaseSpaceField w =
        wigner_field(make_fock(1, 4), grid);
    return expect_near(negativity(w), 4.0 * std::exp(-0.5) - 2.0, 1e-6, "N");
  });

  runner.add("negativity monotone in the pure-state fraction", [] {
    const int dim = 64;
    const PhaseSpaceGrid grid = symmetric_grid(20.0, 0.05);
    for (double beta : {0.4, 10.0}) {
      double prev = -1e-12;
      for (double z : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double n = negativity(wigner_field(make_mixture({beta, 10, z}, dim), grid));
        if (n < prev - 1e-8) return fail("dip at beta = " + std::to_string(beta) +
                                         ", z = " + std::to_string(z));
        prev = n;
      }
    }
    return pass();
  });

  runner.add("mixture roughness: cold-bath dip and hot-bath monotonicity", [] {
    const int dim = 64;
    const IntegralTensorCache cache = build_tensor_cache(dim);
    const double r0 = roughness_general(make_mixture({10.0, 10, 0.0}, dim), cache).r;
    const double r1 = roughness_general(make_mixture({10.0, 10, 1.0}, dim), cache).r;
    bool dipped = false;
    for (double z = 0.05; z < 0.3; z += 0.05) {
      if (roughness_general(make_mixture({10.0, 10, z}, dim), cache).r < r0) dipped = true;
    }
    if (!dipped) return fail("no dip below R(0) for beta = 10");
    if (!(r1 > r0)) return fail("endpoint not above R(0) for beta = 10");
    double prev = -1.0;
    for (double z = 0.0; z <= 1.0 + 1e-12; z += 0.1) {
      const double r = roughness_general(make_mixture({0.4, 10, z}, dim), cache).r;
      if (!(r > prev)) return fail("beta = 0.4 sweep not increasing at z = " +
                                   std::to_string(z));
      prev = r;
    }
    return pass();
  });

  runner.add("kerr evolution: t = 0 identity, frozen diagonal, purity", [] {
    const FockDensityMatrix rho = random_density_matrix(11, 6);
    const KerrParams kp{0.4, 0.9};
    const FockDensityMatrix same = kerr_evolve(rho, kp, 0.0);
    const FockDensityMatrix later = kerr_evolve(rho, kp, 1.7);
    for (int n = 0; n < 6; ++n) {
      for (int m = 0; m < 6; ++m) {
        if (same(n, m) != rho(n, m)) return fail("t = 0 changed a coefficient");
      }
      if (later(n, n) != rho(n, n)) return fail("diagonal drifted");
    }
    if (std::fabs(purity(later) - purity(rho)) > 1e-12) return fail("purity drifted");
    return pass();
  });

  runner.add("kerr evolution: coherent-state revival magnitudes", [] {
    const complexd alpha(2.0, 0.0);
    const int dim = suggested_dim_coherent(alpha);
    const FockDensityMatrix rho0 = make_coherent(alpha, dim);
    const FockDensityMatrix half = kerr_evolve(rho0, KerrParams{0.0, 1.0}, kPi);
    for (int n = 0; n < dim; ++n)
      for (int m = 0; m < dim; ++m)
        if (std::fabs(std::abs(half(n, m)) - std::abs(rho0(n, m))) > 1e-9) {
          return fail("magnitude drift above 1e-9");
        }
    return pass();
  });

  runner.add("classical flow: normalization and windowed annulus mass", [] {
    const complexd alpha(2.0, 0.0);
    const KerrParams kp{0.0, 1.0};
    const PhaseSpaceGrid grid = auto_grid(0.0, 2.0);
    const auto windowed = [&grid](const PhaseSpaceField& f) {
      double s = 0.0;
      for (int i = 0; i < grid.nq; ++i)
        for (int j = 0; j < grid.np; ++j) {
          const double r2 = grid.q(i) * grid.q(i) + grid.p(j) * grid.p(j);
          s += f(i, j) / (1.0 + std::exp(-(r2 - 4.0))) *
               (1.0 - 1.0 / (1.0 + std::exp(-(r2 - 16.0))));
        }
      return s * grid.dq() * grid.dp();
    };
    const double m0 = windowed(classical_liouville_field(alpha, kp, 0.0, grid));
    for (double t : {0.4, 0.8}) {
      const PhaseSpaceField ft = classical_liouville_field(alpha, kp, t, grid);
      if (std::fabs(trapezoid_integral(ft) - 1.0) > 1e-6) {
        return fail("integral drift at t = " + std::to_string(t));
      }
      if (std::fabs(windowed(ft) - m0) > 1e-6) {
        return fail("annulus drift at t = " + std::to_string(t));
      }
    }
    return pass();
  });

  runner.add("dynamic distance vanishes at t = 0", [] {
    const complexd alpha(2.0, 0.0);
    const KerrParams kp{0.0, 1.0};
    const PhaseSpaceGrid grid = auto_grid(0.0, 2.0, 0.1);
    const double d = ddm(classical_liouville_field(alpha, kp, 0.0, grid),
                         kerr_husimi_field(alpha, kp, 0.0, grid, kerr_husimi_terms(alpha)));
    return expect_near(d, 0.0, 1e-6, "D(0)");
  });

  runner.add("trajectory: coherent start, bounds, saturation by 1.5 pi/(4 lambda)", [] {
    const complexd alpha(2.0, 0.0);
    const KerrParams kp{0.0, 1.0};
    const PhaseSpaceGrid grid = auto_grid(0.0, 2.0, 0.1);
    std::vector<double> times;
    for (int i = 0; i <= 24; ++i) times.push_back(i * 0.05);
    const auto records = trajectory(alpha, kp, times, grid, suggested_dim_coherent(alpha));
    if (std::fabs(records[0].roughness - kVacuumR) > 1e-4) return fail("R(0) off");
    if (records[0].ddm > 1e-6) return fail("D(0) off");
    double rmax = 0.0;
    for (const auto& rec : records) {
      if (rec.roughness < 0.0 || rec.roughness > 1.0 + 1e-9) return fail("R out of bounds");
      rmax = std::max(rmax, rec.roughness);
    }
    const double deadline = 1.5 * kPi / (4.0 * kp.lambda);
    for (const auto& rec : records) {
      if (rec.roughness >= 0.95 * rmax) {
        if (rec.t <= deadline) return pass("saturates at t = " + std::to_string(rec.t));
        return fail("saturation only at t = " + std::to_string(rec.t));
      }
    }
    return fail("saturation never reached");
  });

  runner.add("spectral smoothing: gaussian-kernel route matches kernel sums", [] {
    const PhaseSpaceGrid grid = symmetric_grid(12.0, 0.05);
    const FockDensityMatrix rho = make_fock(3, 6);
    const PhaseSpaceField direct = husimi_field(rho, grid);
    const PhaseSpaceField smoothed = smooth_to_husimi(wigner_field(rho, grid));
    double sup = 0.0;
    for (std::size_t i = 0; i < direct.values().size(); ++i)
      sup = std::max(sup, std::fabs(direct.values()[i] - smoothed.values()[i]));
    if (sup < 1e-6) return pass();
    return fail("sup deviation " + std::to_string(sup));
  });

  runner.add("series route equals density-matrix route for the kerr husimi", [] {
    const complexd alpha(2.0, 0.0);
    const KerrParams kp{0.0, 1.0};
    const PhaseSpaceGrid grid = auto_grid(0.0, 2.0, 0.1);
    const FockDensityMatrix rho0 = make_coherent(alpha, suggested_dim_coherent(alpha) + 14);
    const PhaseSpaceField direct =
        kerr_husimi_field(alpha, kp, 0.6, grid, kerr_husimi_terms(alpha));
    const PhaseSpaceField via = husimi_field(kerr_evolve(rho0, kp, 0.6), grid);
    double sup = 0.0;
    for (std::size_t i = 0; i < direct.values().size(); ++i)
      sup = std::max(sup, std::fabs(direct.values()[i] - via.values()[i]));
    if (sup < 1e-8) return pass();
    return fail("sup deviation " + std::to_string(sup));
  });

  runner.add("stirling convolution identity exact for n <= 30", [] {
    using specfun::BigUInt;
    for (int n = 0; n <= 30; ++n)
      for (int j = 0; j <= n; ++j) {
        const BigUInt lhs = specfun::stirling_identity_lhs(n, j);
        const BigUInt rhs = BigUInt::factorial(n - j) * BigUInt::binomial(n, j) *
                            BigUInt::binomial(n, j);
        if (lhs != rhs) return fail("mismatch at (" + std::to_string(n) + ", " +
                                    std::to_string(j) + ")");
      }
    return pass();
  });

  runner.add("central binomial bounds hold for n <= 100", [] {
    for (int n = 1; n <= 100; ++n) {
      const double value = specfun::central_binom_scaled(n);
      const double lower = std::exp(-1.0 / (6.0 * n)) / std::sqrt(kPi * n);
      const double upper = std::exp(1.0 / (24.0 * n)) / std::sqrt(kPi * n);
      if (!(lower <= value && value <= upper)) {
        return fail("bound broken at n = " + std::to_string(n));
      }
    }
    return pass();
  });

  runner.add("cross-term ratio monotone in (1, 10/9] with exact endpoints", [] {
    if (specfun::bn_ratio(0) != 1.0) return fail("B_0 != 1");
    if (specfun::bn_ratio(1) != 10.0 / 9.0) return fail("B_1 != 10/9");
    double prev = specfun::bn_ratio(1);
    for (int n = 2; n <= 60; ++n) {
      const double b = specfun::bn_ratio(n);
      if (!(b < prev && b > 1.0)) return fail("monotonicity broken at n = " +
                                              std::to_string(n));
      prev = b;
    }
    return pass();
  });
}

void add_full_checks(Runner& runner) {
  runner.add("random-state oracle: assembly matches quadrature (dim <= 8)", [] {
    const IntegralTensorCache cache = build_tensor_cache(8);
    for (int trial = 0; trial < 20; ++trial) {
      const int dim = 2 + trial % 7;
      const FockDensityMatrix rho = random_density_matrix(1000 + trial, dim);
      const RoughnessBreakdown b = roughness_general(rho, cache);
      const PhaseSpaceGrid grid = auto_grid_for(rho, 0.1);
      const double numeric =
          roughness_numeric(wigner_field(rho, grid), husimi_field(rho, grid));
      if (std::fabs(b.r - numeric) > 1e-5) {
        return fail("trial " + std::to_string(trial) + ": assembly " +
                    std::to_string(b.r) + " vs quadrature " + std::to_string(numeric));
      }
    }
    return pass();
  });

  runner.add("bounds suite: 50 random states plus family states", [] {
    const IntegralTensorCache cache = build_tensor_cache(8);
    for (int trial = 0; trial < 50; ++trial) {
      const int dim = 2 + trial % 7;
      const RoughnessBreakdown b =
          roughness_general(random_density_matrix(5000 + trial, dim), cache);
      if (!(b.r >= 0.0 && b.r <= 1.0 + 1e-9 && b.r2_wq >= 0.0)) {
        return fail("random trial " + std::to_string(trial));
      }
    }
    for (int n = 0; n <= 60; ++n) {
      const RoughnessBreakdown b = roughness_fock(n);
      if (!(b.r >= 0.0 && b.r <= 1.0 + 1e-9 && b.r2_wq >= 0.0)) {
        return fail("fock n = " + std::to_string(n));
      }
    }
    for (double z = -4.0; z <= 4.0; z += 0.5) {
      const double r = roughness_squeezed(z);
      if (!(r >= 0.0 && r <= 1.0 + 1e-9)) return fail("squeezed");
    }
    for (double q0 = 0.25; q0 <= 6.0; q0 += 0.25) {
      if (!(roughness_cat(q0, CatParity::even) <= 1.0 + 1e-9)) return fail("cat even");
      if (!(roughness_cat(q0, CatParity::odd) <= 1.0 + 1e-9)) return fail("cat odd");
    }
    for (double nbar = 0.0; nbar <= 20.0; nbar += 0.5) {
      if (!(roughness_thermal(nbar) <= kVacuumR + 1e-12)) return fail("thermal");
    }
    return pass();
  });

  runner.add("smoothing two-route agreement on random states (dim <= 12)", [] {
    const PhaseSpaceGrid grid = symmetric_grid(16.0, 0.05);
    for (int trial = 0; trial < 3; ++trial) {
      const FockDensityMatrix rho = random_density_matrix(9000 + trial, 12);
      const PhaseSpaceField direct = husimi_field(rho, grid);
      const PhaseSpaceField smoothed = smooth_to_husimi(wigner_field(rho, grid));
      double sup = 0.0;
      for (std::size_t i = 0; i < direct.values().size(); ++i)
        sup = std::max(sup, std::fabs(direct.values()[i] - smoothed.values()[i]));
      if (sup > 1e-6) return fail("trial " + std::to_string(trial) +
                                  ": sup " + std::to_string(sup));
    }
    return pass();
  });

  runner.add("minimum-roughness search over random pure states (report only)", [] {
    const IntegralTensorCache cache = build_tensor_cache(8);
    double min_r = 2.0;
    int below = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int dim = 2 + trial % 7;
      const double r = roughness_general(random_pure_state(33000 + trial, dim), cache).r;
      min_r = std::min(min_r, r);
      if (r < kVacuumR - 1e-9) ++below;
    }
    std::ostringstream os;
    os << "min R = " << min_r << " over 200 pure states; " << below
       << " below 1/sqrt(6)";
    return pass(os.str());
  });
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport run_validate(ValidateLevel level) {
  Runner runner;
  add_quick_checks(runner);
  if (level == ValidateLevel::full) add_full_checks(runner);
  return runner.take();
}

std::string format_validation_report(const ValidationReport& report) {
  std::size_t width = 0;
  for (const ValidationCheck& c : report.checks) width = std::max(width, c.name.size());
  std::ostringstream os;
  int failed = 0;
  for (const ValidationCheck& c : report.checks) {
    os << (c.passed ? "PASS  " : "FAIL  ") << c.name;
    if (!c.detail.empty()) {
      os << std::string(width - c.name.size() + 2, ' ') << c.detail;
    }
    os << '\n';
    if (!c.passed) ++failed;
  }
  os << (failed == 0 ? "all " : "") << report.checks.size() - failed << " of "
     << report.checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace rough
