#include "rough/phasespace.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "internal_util.hpp"
#include "rough/specfun.hpp"

namespace rough {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHermTol = 1e-10;          // input hermiticity guard
constexpr double kHusimiFloor = -1e-12;     // numerical floor for Q >= 0
constexpr double kBoundaryAbsTol = 1e-12;   // negativity perimeter decay
constexpr double kTinyRun = 1e-13;          // noise-level negative runs

int even_point_count(double half_width, double max_spacing) {
  if (!(half_width > 0.0) || !(max_spacing > 0.0))
    throw std::invalid_argument("grid sizing: half width and spacing must be positive");
  int n = static_cast<int>(std::ceil(2.0 * half_width / max_spacing + 1.0));
  if (n % 2 != 0) ++n;
  return std::max(n, 8);
}

}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(double q_lo, double q_hi, double p_lo, double p_hi, int n_q,
                               int n_p)
    : q_min(q_lo), q_max(q_hi), p_min(p_lo), p_max(p_hi), nq(n_q), np(n_p) {
  if (!(q_max > q_min) || !(p_max > p_min))
    throw std::invalid_argument("PhaseSpaceGrid: empty axis range");
  if (nq < 8 || np < 8 || nq % 2 != 0 || np % 2 != 0)
    throw std::invalid_argument("PhaseSpaceGrid: point counts must be even and >= 8");
  if (!std::isfinite(q_min) || !std::isfinite(q_max) || !std::isfinite(p_min) ||
      !std::isfinite(p_max))
    throw std::invalid_argument("PhaseSpaceGrid: non-finite bounds");
}

PhaseSpaceGrid symmetric_grid(double half_width, double max_spacing) {
  const int n = even_point_count(half_width, max_spacing);
  return PhaseSpaceGrid(-half_width, half_width, -half_width, half_width, n, n);
}

PhaseSpaceGrid auto_grid(double nbar, double alpha_abs, double max_spacing) {
  if (nbar < 0.0 || alpha_abs < 0.0)
    throw std::invalid_argument("auto_grid: nbar and |alpha| must be non-negative");
  const double half = std::max({6.0, 8.0 * std::sqrt(2.0 * nbar + 1.0),
                                2.0 * (std::sqrt(2.0) * alpha_abs + 5.0)});
  return symmetric_grid(half, max_spacing);
}

PhaseSpaceGrid auto_grid_for(const AnalyticStateSpec& spec, double max_spacing) {
  struct Sizer {
    double nbar = 0.0;
    double alpha_abs = 0.0;
    void operator()(const Coherent& c) {
      alpha_abs = std::sqrt(0.5 * (c.q0 * c.q0 + c.p0 * c.p0));
    }
    void operator()(const Squeezed& s) { nbar = std::sinh(s.zeta) * std::sinh(s.zeta); }
    void operator()(const Thermal& t) { nbar = t.nbar; }
    void operator()(const CatEven& c) { alpha_abs = c.q0 / std::sqrt(2.0); }
    void operator()(const CatOdd& c) { alpha_abs = c.q0 / std::sqrt(2.0); }
  } sizer;
  std::visit(sizer, spec);
  return auto_grid(sizer.nbar, sizer.alpha_abs, max_spacing);
}

PhaseSpaceGrid auto_grid_for(const FockDensityMatrix& rho, double max_spacing) {
  const double nbar = std::max(0.0, mean_photon(rho));
  return auto_grid(nbar, std::sqrt(nbar), max_spacing);
}

std::string field_kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::wigner: return "wigner";
    case FieldKind::husimi: return "husimi";
    case FieldKind::classical: return "classical";
  }
  return "unknown";
}

PhaseSpaceField::PhaseSpaceField(const PhaseSpaceGrid& grid, FieldKind kind)
    : grid_(grid), kind_(kind),
      values_(static_cast<std::size_t>(grid.nq) * grid.np, 0.0) {}

namespace {

// Coefficient lists A[m+k][m] grouped by the diagonal offset k = n - m >= 0.
// Pairing each offset with its conjugate mirror keeps the series real by
// construction, so only k >= 0 is ever evaluated.
struct OffsetCoefficients {
  std::vector<std::vector<complexd>> coef;  // coef[k][m] = A[m+k][m]
  std::vector<char> active;
};

OffsetCoefficients collect_offsets(const FockDensityMatrix& rho) {
  const int dim = rho.dim();
  OffsetCoefficients out;
  out.coef.resize(dim);
  out.active.assign(dim, 0);
  for (int k = 0; k < dim; ++k) {
    out.coef[k].resize(dim - k);
    for (int m = 0; m + k < dim; ++m) {
      const complexd v = rho(m + k, m);
      out.coef[k][m] = v;
      if (std::abs(v) > 0.0) out.active[k] = 1;
    }
  }
  return out;
}

// Recurrence constants for the normalized kernels at offset k, shared by the
// Wigner and Husimi series: step m -> m+1 divides by sqrt((m+1)(m+k+1)).
struct OffsetRecurrence {
  std::vector<double> sqrt_lower;     // sqrt(m (m+k))
  std::vector<double> inv_sqrt_step;  // 1 / sqrt((m+1)(m+k+1))
};

std::vector<OffsetRecurrence> build_recurrences(const OffsetCoefficients& oc) {
  const int dim = static_cast<int>(oc.coef.size());
  std::vector<OffsetRecurrence> rec(dim);
  for (int k = 0; k < dim; ++k) {
    if (!oc.active[k]) continue;
    const int mmax = static_cast<int>(oc.coef[k].size());
    rec[k].sqrt_lower.resize(mmax);
    rec[k].inv_sqrt_step.resize(mmax);
    for (int m = 0; m < mmax; ++m) {
      rec[k].sqrt_lower[m] = std::sqrt(static_cast<double>(m) * (m + k));
      rec[k].inv_sqrt_step[m] =
          1.0 / std::sqrt(static_cast<double>(m + 1) * (m + k + 1));
    }
  }
  return rec;
}

void require_hermitian(const FockDensityMatrix& rho, const char* where) {
  if (rho.hermiticity_residue() > kHermTol)
    throw std::runtime_error(std::string(where) +
                             ": density matrix fails the hermiticity check, the series "
                             "would carry an imaginary residue");
}

}  // namespace

PhaseSpaceField wigner_field(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid) {
  require_hermitian(rho, "wigner_field");
  const int dim = rho.dim();
  const auto oc = collect_offsets(rho);
  const auto rec = build_recurrences(oc);

  PhaseSpaceField out(grid, FieldKind::wigner);
  detail::parallel_for_blocks(grid.nq, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const double q = grid.q(i);
      for (int j = 0; j < grid.np; ++j) {
        const double p = grid.p(j);
        const double r2 = q * q + p * p;
        const double x = 2.0 * r2;  // 4 |alpha|^2
        // unit phase exp(-i theta) with theta = arg(q + ip)
        const complexd phase =
            r2 > 0.0 ? complexd(q, -p) / std::sqrt(r2) : complexd(1.0, 0.0);
        complexd phase_k(1.0, 0.0);
        double acc = 0.0;
        for (int k = 0; k < dim; ++k, phase_k *= phase) {
          if (!oc.active[k]) continue;
          const auto& c = oc.coef[k];
          const auto& r = rec[k];
          const int mmax = static_cast<int>(c.size());
          double t_prev = 0.0;
          double t =
              x > 0.0
                  ? std::exp(-0.5 * x + 0.5 * k * std::log(x) -
                             0.5 * specfun::log_factorial(k))
                  : (k == 0 ? 1.0 : 0.0);
          complexd d(0.0, 0.0);
          double sign = 1.0;
          for (int m = 0; m < mmax; ++m) {
            d += c[m] * (sign * t);
            sign = -sign;
            const double t_next =
                ((2.0 * m + k + 1.0 - x) * t - r.sqrt_lower[m] * t_prev) *
                r.inv_sqrt_step[m];
            t_prev = t;
            t = t_next;
          }
          acc += (k == 0) ? d.real() : 2.0 * (phase_k * d).real();
        }
        out(i, j) = acc / kPi;
      }
    }
  });
  return out;
}

PhaseSpaceField husimi_field(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid) {
  require_hermitian(rho, "husimi_field");
  const int dim = rho.dim();
  const auto oc = collect_offsets(rho);
  const auto rec = build_recurrences(oc);

  PhaseSpaceField out(grid, FieldKind::husimi);
  detail::parallel_for_blocks(grid.nq, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const double q = grid.q(i);
      for (int j = 0; j < grid.np; ++j) {
        const double p = grid.p(j);
        const double a2 = 0.5 * (q * q + p * p);  // |alpha|^2
        const complexd phase =
            a2 > 0.0 ? complexd(q, -p) / std::sqrt(q * q + p * p) : complexd(1.0, 0.0);
        complexd phase_k(1.0, 0.0);
        double acc = 0.0;
        for (int k = 0; k < dim; ++k, phase_k *= phase) {
          if (!oc.active[k]) continue;
          const auto& c = oc.coef[k];
          const auto& r = rec[k];
          const int mmax = static_cast<int>(c.size());
          double u =
              a2 > 0.0
                  ? std::exp(-a2 + 0.5 * k * std::log(a2) -
                             0.5 * specfun::log_factorial(k))
                  : (k == 0 ? 1.0 : 0.0);
          complexd d(0.0, 0.0);
          for (int m = 0; m < mmax; ++m) {
            d += c[m] * u;
            u *= a2 * r.inv_sqrt_step[m];
          }
          acc += (k == 0) ? d.real() : 2.0 * (phase_k * d).real();
        }
        out(i, j) = acc / (2.0 * kPi);
      }
    }
  });

  double min_value = 0.0;
  for (double v : out.values()) min_value = std::min(min_value, v);
  if (min_value < kHusimiFloor)
    throw std::runtime_error(
        "husimi_field: values below the -1e-12 floor; the input state is inconsistent");
  return out;
}

namespace {

void require_cat_argument(double q0, bool odd) {
  if (!(q0 >= 0.0)) throw std::invalid_argument("cat state: q0 must be non-negative");
  if (odd && q0 == 0.0)
    throw std::domain_error("odd cat state is undefined at q0 = 0 (null vector)");
}

template <typename F>
PhaseSpaceField fill_field(const PhaseSpaceGrid& grid, FieldKind kind, F&& f) {
  PhaseSpaceField out(grid, kind);
  detail::parallel_for_blocks(grid.nq, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const double q = grid.q(i);
      for (int j = 0; j < grid.np; ++j) out(i, j) = f(q, grid.p(j));
    }
  });
  return out;
}

}  // namespace

PhaseSpaceField analytic_field(const AnalyticStateSpec& spec, FieldKind which,
                               const PhaseSpaceGrid& grid) {
  if (which != FieldKind::wigner && which != FieldKind::husimi)
    throw std::invalid_argument("analytic_field: which must be Wigner or Husimi");
  const bool wig = which == FieldKind::wigner;

  return std::visit(
      [&](const auto& s) -> PhaseSpaceField {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Coherent>) {
          const double q0 = s.q0, p0 = s.p0;
          if (wig)
            return fill_field(grid, which, [=](double q, double p) {
              const double d2 = (q - q0) * (q - q0) + (p - p0) * (p - p0);
              return std::exp(-d2) / kPi;
            });
          return fill_field(grid, which, [=](double q, double p) {
            const double d2 = (q - q0) * (q - q0) + (p - p0) * (p - p0);
            return std::exp(-0.5 * d2) / (2.0 * kPi);
          });
        } else if constexpr (std::is_same_v<T, Squeezed>) {
          const double z = s.zeta;
          if (!std::isfinite(z)) throw std::invalid_argument("squeezed: zeta must be finite");
          if (wig) {
            const double aq = std::exp(2.0 * z), ap = std::exp(-2.0 * z);
            return fill_field(grid, which, [=](double q, double p) {
              return std::exp(-aq * q * q - ap * p * p) / kPi;
            });
          }
          const double aq = 1.0 / (1.0 + std::exp(-2.0 * z));
          const double ap = 1.0 / (1.0 + std::exp(2.0 * z));
          const double norm = 1.0 / (2.0 * kPi * std::cosh(z));
          return fill_field(grid, which, [=](double q, double p) {
            return norm * std::exp(-aq * q * q - ap * p * p);
          });
        } else if constexpr (std::is_same_v<T, Thermal>) {
          const double nbar = s.nbar;
          if (!(nbar >= 0.0)) throw std::invalid_argument("thermal: nbar must be >= 0");
          if (wig) {
            const double w = 2.0 * nbar + 1.0;
            return fill_field(grid, which, [=](double q, double p) {
              return std::exp(-(q * q + p * p) / w) / (kPi * w);
            });
          }
          const double w = nbar + 1.0;
          return fill_field(grid, which, [=](double q, double p) {
            return std::exp(-(q * q + p * p) / (2.0 * w)) / (2.0 * kPi * w);
          });
        } else {
          constexpr bool odd = std::is_same_v<T, CatOdd>;
          const double q0 = s.q0;
          require_cat_argument(q0, odd);
          // normalization 2 (1 +/- e^{-q0^2}); the odd case uses expm1 to
          // survive q0 -> 0 without catastrophic cancellation
          const double norm_factor =
              odd ? -std::expm1(-q0 * q0) : 1.0 + std::exp(-q0 * q0);
          const double interference_sign = odd ? -1.0 : 1.0;
          if (wig) {
            const double inv_norm = 1.0 / (2.0 * kPi * norm_factor);
            return fill_field(grid, which, [=](double q, double p) {
              const double gm = std::exp(-((q - q0) * (q - q0) + p * p));
              const double gp = std::exp(-((q + q0) * (q + q0) + p * p));
              const double cross =
                  2.0 * std::exp(-(q * q + p * p)) * std::cos(2.0 * q0 * p);
              return inv_norm * (gm + gp + interference_sign * cross);
            });
          }
          const double inv_norm = 1.0 / (4.0 * kPi * norm_factor);
          const double cross_amp = 2.0 * std::exp(-0.5 * q0 * q0);
          return fill_field(grid, which, [=](double q, double p) {
            const double gm = std::exp(-0.5 * ((q - q0) * (q - q0) + p * p));
            const double gp = std::exp(-0.5 * ((q + q0) * (q + q0) + p * p));
            const double cross =
                cross_amp * std::exp(-0.5 * (q * q + p * p)) * std::cos(q0 * p);
            return inv_norm * (gm + gp + interference_sign * cross);
          });
        }
      },
      spec);
}

namespace {

double axis_weight(int idx, int count) { return (idx == 0 || idx == count - 1) ? 0.5 : 1.0; }

template <typename F>
double weighted_grid_sum(const PhaseSpaceGrid& grid, F&& value_at) {
  detail::CompensatedSum total;
  for (int i = 0; i < grid.nq; ++i) {
    detail::CompensatedSum row;
    for (int j = 0; j < grid.np; ++j) row.add(axis_weight(j, grid.np) * value_at(i, j));
    total.add(axis_weight(i, grid.nq) * row.value());
  }
  return total.value() * grid.dq() * grid.dp();
}

}  // namespace

double trapezoid_integral(const PhaseSpaceField& field) {
  return weighted_grid_sum(field.grid(), [&](int i, int j) { return field(i, j); });
}

double boundary_mass(const PhaseSpaceField& field) {
  const auto& g = field.grid();
  detail::CompensatedSum sum;
  for (int i = 0; i < g.nq; ++i) {
    for (int j = 0; j < g.np; ++j) {
      if (i != 0 && i != g.nq - 1 && j != 0 && j != g.np - 1) continue;
      sum.add(axis_weight(i, g.nq) * axis_weight(j, g.np) * std::fabs(field(i, j)));
    }
  }
  return sum.value() * g.dq() * g.dp();
}

double max_boundary_abs(const PhaseSpaceField& field) {
  const auto& g = field.grid();
  double m = 0.0;
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j) {
      if (i != 0 && i != g.nq - 1 && j != 0 && j != g.np - 1) continue;
      m = std::max(m, std::fabs(field(i, j)));
    }
  return m;
}

namespace {

// --- negative-part quadrature -------------------------------------------
//
// integral of max(-W, 0) along one grid line.  |W| has a kink at each zero
// crossing, so a plain trapezoid stalls at O(h^2) with an oscillating sign.
// Each maximal run of negative W is integrated as:
//   * crossing cells: a local cubic through the four surrounding samples,
//     its root located by safeguarded Newton, and the partial cell
//     integrated exactly from the cubic;
//   * interior: composite trapezoid plus the (h^2/12)(g'(a) - g'(b))
//     curvature correction with central-difference derivatives.
// Runs touching the outer two cells (forced below 1e-12 by the boundary
// precheck) or of noise-level amplitude fall back to a clipped trapezoid.

struct Cubic {
  double a, b, c, d;  // c(s) = ((a s + b) s + c) s + d on the unit cell
};

Cubic cell_cubic(double fm1, double f0, double f1, double f2) {
  return {0.5 * (f2 - fm1) + 1.5 * (f0 - f1), fm1 - 2.5 * f0 + 2.0 * f1 - 0.5 * f2,
          0.5 * (f1 - fm1), f0};
}

double cubic_eval(const Cubic& c, double s) { return ((c.a * s + c.b) * s + c.c) * s + c.d; }

double cubic_antiderivative(const Cubic& c, double s) {
  return (((c.a / 4.0) * s + c.b / 3.0) * s + c.c / 2.0) * s * s + c.d * s;
}

// Root in [0,1] of the cell cubic; endpoint values f0, f1 straddle zero.
double cubic_crossing(const Cubic& c, double f0, double f1) {
  double lo = 0.0, hi = 1.0;
  double s = f0 / (f0 - f1);  // start from the linear crossing
  for (int it = 0; it < 40; ++it) {
    const double val = cubic_eval(c, s);
    if (val == 0.0) return s;
    if ((val > 0.0) == (f0 > 0.0))
      lo = s;
    else
      hi = s;
    const double der = (3.0 * c.a * s + 2.0 * c.b) * s + c.c;
    double next = der != 0.0 ? s - val / der : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - s) < 1e-15) return next;
    s = next;
  }
  return s;
}

double run_integral(const double* w, int n, double h, int j1, int j2) {
  const auto g = [&](int j) { return -w[j]; };
  double gmax = 0.0;
  for (int j = j1; j <= j2; ++j) gmax = std::max(gmax, g(j));

  if (j1 < 2 || j2 > n - 3 || gmax < kTinyRun) {
    double s = 0.0;
    for (int j = j1; j <= j2; ++j) s += g(j);
    return s * h;  // trapezoid of the clipped integrand
  }

  const Cubic cl = cell_cubic(g(j1 - 2), g(j1 - 1), g(j1), g(j1 + 1));
  const double sl = cubic_crossing(cl, g(j1 - 1), g(j1));
  const double left = (cubic_antiderivative(cl, 1.0) - cubic_antiderivative(cl, sl)) * h;

  const Cubic cr = cell_cubic(g(j2 - 1), g(j2), g(j2 + 1), g(j2 + 2));
  const double sr = cubic_crossing(cr, g(j2), g(j2 + 1));
  const double right = cubic_antiderivative(cr, sr) * h;

  double interior = 0.0;
  if (j2 > j1) {
    double s = 0.5 * (g(j1) + g(j2));
    for (int j = j1 + 1; j < j2; ++j) s += g(j);
    const double d_left = (g(j1 + 1) - g(j1 - 1)) / (2.0 * h);
    const double d_right = (g(j2 + 1) - g(j2 - 1)) / (2.0 * h);
    interior = s * h + (h * h / 12.0) * (d_left - d_right);
  }
  return left + interior + right;
}

double line_negative_part(const double* w, int n, double h) {
  double total = 0.0;
  int j = 0;
  while (j < n) {
    if (-w[j] > 0.0) {
      int j2 = j;
      while (j2 + 1 < n && -w[j2 + 1] > 0.0) ++j2;
      total += run_integral(w, n, h, j, j2);
      j = j2 + 1;
    } else {
      ++j;
    }
  }
  return total;
}

}  // namespace

double negativity(const PhaseSpaceField& w) {
  if (w.kind() != FieldKind::wigner)
    throw std::invalid_argument("negativity: field kind must be Wigner");
  if (max_boundary_abs(w) >= kBoundaryAbsTol)
    throw std::invalid_argument(
        "negativity: |W| has not decayed below 1e-12 at the grid boundary; enlarge the grid");

  const auto& g = w.grid();
  detail::CompensatedSum neg;
  for (int i = 0; i < g.nq; ++i) {
    const double li =
        line_negative_part(w.values().data() + static_cast<std::size_t>(i) * g.np, g.np,
                           g.dp());
    neg.add(axis_weight(i, g.nq) * li);
  }
  // integral |W| - 1 == (integral W - 1) + 2 integral max(-W, 0); the first
  // piece is a smooth superconvergent trapezoid, the second carries the kink
  // corrections computed above.
  return (trapezoid_integral(w) - 1.0) + 2.0 * neg.value() * g.dq();
}

double integral_of_squared_difference(const PhaseSpaceField& a, const PhaseSpaceField& b) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("fields live on different grids");
  return weighted_grid_sum(a.grid(), [&](int i, int j) {
    const double d = a(i, j) - b(i, j);
    return d * d;
  });
}

double roughness_numeric(const PhaseSpaceField& w, const PhaseSpaceField& q) {
  if (w.kind() != FieldKind::wigner || q.kind() != FieldKind::husimi)
    throw std::invalid_argument("roughness_numeric: expects a Wigner and a Husimi field");
  return std::sqrt(2.0 * kPi * integral_of_squared_difference(w, q));
}

double roughness_numeric(const AnalyticStateSpec& spec) {
  const PhaseSpaceGrid grid = auto_grid_for(spec);
  const PhaseSpaceField w = analytic_field(spec, FieldKind::wigner, grid);
  const PhaseSpaceField q = analytic_field(spec, FieldKind::husimi, grid);
  return roughness_numeric(w, q);
}

double wigner_purity(const PhaseSpaceField& w) {
  if (w.kind() != FieldKind::wigner)
    throw std::invalid_argument("wigner_purity: field kind must be Wigner");
  const double s = weighted_grid_sum(w.grid(), [&](int i, int j) {
    const double v = w(i, j);
    return v * v;
  });
  return 2.0 * kPi * s;
}

std::string field_to_csv(const PhaseSpaceField& field) {
  const auto& g = field.grid();
  std::string out;
  out.reserve(static_cast<std::size_t>(g.nq) * g.np * 24 + 128);
  out += "# kind=" + field_kind_name(field.kind()) + " q_min=" + detail::format_g12(g.q_min) +
         " q_max=" + detail::format_g12(g.q_max) + " p_min=" + detail::format_g12(g.p_min) +
         " p_max=" + detail::format_g12(g.p_max) + " nq=" + std::to_string(g.nq) +
         " np=" + std::to_string(g.np) + "\n";
  out += "q,p,value\n";
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j) {
      out += detail::format_g12(g.q(i));
      out += ',';
      out += detail::format_g12(g.p(j));
      out += ',';
      out += detail::format_g12(field(i, j));
      out += '\n';
    }
  return out;
}

std::string field_to_json(const PhaseSpaceField& field) {
  const auto& g = field.grid();
  nlohmann::json j;
  j["grid"] = {{"q_min", g.q_min}, {"q_max", g.q_max}, {"p_min", g.p_min},
               {"p_max", g.p_max}, {"nq", g.nq},       {"np", g.np}};
  j["kind"] = field_kind_name(field.kind());
  j["values"] = field.values();
  return j.dump();
}

}  // namespace rough
