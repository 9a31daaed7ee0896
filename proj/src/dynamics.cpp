#include "rough/dynamics.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "internal_util.hpp"
#include "rough/roughness.hpp"

namespace rough {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryMassTol = 1e-10;
constexpr double kPoissonMassTol = 1e-10;   // precondition on n_terms
constexpr double kPoissonMargin = 1e-13;    // tail used when self-selecting
constexpr int kMaxSeriesTerms = 4000;

void require_kerr(const KerrParams& params) {
  if (!(params.lambda > 0.0) || !std::isfinite(params.lambda) ||
      !std::isfinite(params.omega)) {
    throw std::invalid_argument("KerrParams: lambda must be > 0 and finite");
  }
}

// Mass of the first n terms of Poisson(mu).
double poisson_head(double mu, int n) {
  rough::detail::CompensatedSum mass;
  double p = std::exp(-mu);
  for (int i = 0; i < n; ++i) {
    mass.add(p);
    p *= mu / (i + 1);
  }
  return mass.value();
}

}  // namespace

FockDensityMatrix kerr_evolve(const FockDensityMatrix& rho0,
                              const KerrParams& params, double t) {
  require_kerr(params);
  if (!std::isfinite(t)) throw std::invalid_argument("kerr_evolve: t must be finite");
  const int dim = rho0.dim();
  FockDensityMatrix out(dim);
  for (int n = 0; n < dim; ++n) {
    out.set_hermitian_pair(n, n, rho0(n, n));
    for (int m = 0; m < n; ++m) {
      const double phase = t * (m - n) * (params.omega + params.lambda * (n + m));
      out.set_hermitian_pair(n, m,
                             rho0(n, m) * std::polar(1.0, phase));
    }
  }
  return out;
}

PhaseSpaceField classical_liouville_field(complexd alpha0,
                                          const KerrParams& params, double t,
                                          const PhaseSpaceGrid& grid) {
  require_kerr(params);
  PhaseSpaceField field(grid, FieldKind::classical);
  rough::detail::parallel_for_blocks(grid.nq, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const double q = grid.q(i);
      for (int j = 0; j < grid.np; ++j) {
        const double p = grid.p(j);
        const double theta = t * (params.omega + params.lambda * (q * q + p * p));
        const complexd beta(q / std::sqrt(2.0), p / std::sqrt(2.0));
        const complexd displaced = alpha0 - beta * std::polar(1.0, theta);
        field(i, j) = std::exp(-std::norm(displaced)) / (2.0 * kPi);
      }
    }
  });
  return field;
}

int kerr_husimi_terms(complexd alpha0) {
  const double mu = std::norm(alpha0);
  rough::detail::CompensatedSum mass;
  double p = std::exp(-mu);
  for (int n = 1; n <= kMaxSeriesTerms; ++n) {
    mass.add(p);
    if (mass.value() >= 1.0 - kPoissonMargin) return n;
    p *= mu / n;
  }
  throw std::runtime_error("kerr_husimi_terms: series does not converge below cap");
}

PhaseSpaceField kerr_husimi_field(complexd alpha0, const KerrParams& params,
                                  double t, const PhaseSpaceGrid& grid,
                                  int n_terms) {
  require_kerr(params);
  if (n_terms < 1 || n_terms > kMaxSeriesTerms) {
    throw std::invalid_argument("kerr_husimi_field: n_terms out of range");
  }
  const double mu = std::norm(alpha0);
  if (poisson_head(mu, n_terms) < 1.0 - kPoissonMassTol) {
    throw std::invalid_argument(
        "kerr_husimi_field: insufficient n_terms for the requested amplitude");
  }

  // e_n = alpha0^n e^{-i t (omega n + lambda n^2)} / n!, consumed by a Horner
  // pass in conj(beta) at every grid point.
  std::vector<complexd> coeff(static_cast<std::size_t>(n_terms));
  complexd alpha_pow(1.0, 0.0);
  double inv_fact = 1.0;
  for (int n = 0; n < n_terms; ++n) {
    if (n > 0) {
      alpha_pow *= alpha0;
      inv_fact /= n;
    }
    const double phase = -t * (params.omega * n + params.lambda * n * static_cast<double>(n));
    coeff[n] = alpha_pow * inv_fact * std::polar(1.0, phase);
  }

  PhaseSpaceField field(grid, FieldKind::husimi);
  rough::detail::parallel_for_blocks(grid.nq, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const double q = grid.q(i);
      for (int j = 0; j < grid.np; ++j) {
        const double p = grid.p(j);
        const complexd beta_conj(q / std::sqrt(2.0), -p / std::sqrt(2.0));
        complexd s(0.0, 0.0);
        for (int n = n_terms - 1; n >= 0; --n) s = s * beta_conj + coeff[n];
        const double damp = std::exp(-0.5 * (std::norm(beta_conj) + mu));
        const double amp = std::abs(s) * damp;
        field(i, j) = amp * amp / (2.0 * kPi);
      }
    }
  });
  return field;
}

double ddm(const PhaseSpaceField& f, const PhaseSpaceField& q) {
  if (!(f.grid() == q.grid())) {
    throw std::invalid_argument("ddm: fields must share a grid");
  }
  if (f.kind() != FieldKind::classical || q.kind() != FieldKind::husimi) {
    throw std::invalid_argument(
        "ddm: expects a classical distribution and a Husimi function");
  }
  if (boundary_mass(f) >= kBoundaryMassTol || boundary_mass(q) >= kBoundaryMassTol) {
    throw std::invalid_argument(
        "ddm: grid boundary carries more than 1e-10 of a field's mass");
  }
  return std::sqrt(kPi * integral_of_squared_difference(f, q));
}

std::vector<TrajectoryRecord> trajectory(complexd alpha0,
                                         const KerrParams& params,
                                         std::span<const double> times,
                                         const PhaseSpaceGrid& grid, int dim) {
  require_kerr(params);
  const FockDensityMatrix rho0 = make_coherent(alpha0, dim);
  const IntegralTensorCache cache = build_tensor_cache(dim);
  const int n_terms = kerr_husimi_terms(alpha0);

  std::vector<TrajectoryRecord> records(times.size());
  rough::detail::parallel_for_blocks(
      static_cast<int>(times.size()), [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
          const double t = times[i];
          const RoughnessBreakdown b =
              roughness_general(kerr_evolve(rho0, params, t), cache);
          const PhaseSpaceField f = classical_liouville_field(alpha0, params, t, grid);
          const PhaseSpaceField qf = kerr_husimi_field(alpha0, params, t, grid, n_terms);
          const double d = ddm(f, qf);
          if (b.r < 0.0 || b.r > 1.0 + 1e-9 || d < 0.0) {
            throw std::runtime_error("trajectory: record violates its bounds");
          }
          records[i] = TrajectoryRecord{t, b.r, d};
        }
      });
  return records;
}

std::string trajectory_to_csv(const std::vector<TrajectoryRecord>& records,
                              const std::string& metadata) {
  std::ostringstream out;
  if (!metadata.empty()) out << "# " << metadata << "\n";
  out << "t,R,D\n";
  for (const TrajectoryRecord& rec : records) {
    out << rough::detail::format_g12(rec.t) << ','
        << rough::detail::format_g12(rec.roughness) << ','
        << rough::detail::format_g12(rec.ddm) << '\n';
  }
  return out.str();
}

}  // namespace rough
