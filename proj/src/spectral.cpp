#include "rough/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "internal_util.hpp"

namespace rough {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryMassTol = 1e-10;

// FFTW planning is not thread-safe; executions of distinct plans are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Smallest 5-smooth size >= n: keeps FFTW on its fast codelets while padding
// far less than the next power of two on large grids.
int next_fast_size(int n) {
  for (int m = n;; ++m) {
    int r = m;
    for (int f : {2, 3, 5})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

void transform_in_place(std::vector<std::complex<double>>& data, int n0, int n1, int sign) {
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  std::unique_lock<std::mutex> lock(planner_mutex());
  fftw_plan plan = fftw_plan_dft_2d(n0, n1, raw, raw, sign, FFTW_ESTIMATE);
  lock.unlock();
  fftw_execute(plan);
  lock.lock();
  fftw_destroy_plan(plan);
}

double signed_frequency(int k, int count, double spacing) {
  const int shifted = (k <= count / 2) ? k : k - count;
  return 2.0 * kPi * shifted / (count * spacing);
}

struct PaddedTransform {
  int pq, pp;
  std::vector<std::complex<double>> data;  // forward DFT of the zero-padded field
};

PaddedTransform forward_padded(const PhaseSpaceField& field) {
  const auto& g = field.grid();
  PaddedTransform out;
  out.pq = next_fast_size(2 * g.nq);
  out.pp = next_fast_size(2 * g.np);
  out.data.assign(static_cast<std::size_t>(out.pq) * out.pp, {0.0, 0.0});
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j)
      out.data[static_cast<std::size_t>(i) * out.pp + j] = field(i, j);
  transform_in_place(out.data, out.pq, out.pp, FFTW_FORWARD);
  return out;
}

void require_decayed(const PhaseSpaceField& w, const char* where) {
  if (boundary_mass(w) >= kBoundaryMassTol)
    throw std::invalid_argument(std::string(where) +
                                ": field mass at the grid boundary exceeds 1e-10; "
                                "enlarge the grid to avoid wrap-around leakage");
}

}  // namespace

double SpectralField::u(int k) const { return signed_frequency(k, pq, source_grid.dq()); }
double SpectralField::v(int l) const { return signed_frequency(l, pp, source_grid.dp()); }

SpectralField spectral_transform(const PhaseSpaceField& field) {
  const auto& g = field.grid();
  PaddedTransform t = forward_padded(field);

  SpectralField sf;
  sf.source_grid = g;
  sf.source_kind = field.kind();
  sf.pq = t.pq;
  sf.pp = t.pp;
  sf.coeffs = std::move(t.data);

  const double scale = g.dq() * g.dp() / (2.0 * kPi);
  for (int k = 0; k < sf.pq; ++k) {
    const double uk = sf.u(k);
    for (int l = 0; l < sf.pp; ++l) {
      const double phase = -(uk * g.q_min + sf.v(l) * g.p_min);
      sf.coeffs[static_cast<std::size_t>(k) * sf.pp + l] *=
          scale * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return sf;
}

PhaseSpaceField spectral_inverse(const SpectralField& sf) {
  const auto& g = sf.source_grid;
  std::vector<std::complex<double>> data(sf.coeffs.size());
  const double scale = 2.0 * kPi / (g.dq() * g.dp());
  for (int k = 0; k < sf.pq; ++k) {
    const double uk = sf.u(k);
    for (int l = 0; l < sf.pp; ++l) {
      const double phase = uk * g.q_min + sf.v(l) * g.p_min;
      data[static_cast<std::size_t>(k) * sf.pp + l] =
          sf.coeffs[static_cast<std::size_t>(k) * sf.pp + l] * scale *
          std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  transform_in_place(data, sf.pq, sf.pp, FFTW_BACKWARD);

  PhaseSpaceField out(g, sf.source_kind);
  const double inv = 1.0 / (static_cast<double>(sf.pq) * sf.pp);
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j)
      out(i, j) = data[static_cast<std::size_t>(i) * sf.pp + j].real() * inv;
  return out;
}

PhaseSpaceField smooth_to_husimi(const PhaseSpaceField& w) {
  if (w.kind() != FieldKind::wigner)
    throw std::invalid_argument("smooth_to_husimi: field kind must be Wigner");
  require_decayed(w, "smooth_to_husimi");

  const auto& g = w.grid();
  PaddedTransform t = forward_padded(w);

  // The sampled Gaussian kernel's unnormalized transform is exactly
  // exp(-(u^2+v^2)/4): the trapezoid sum behind that identity converges
  // beyond double precision at the spacings admitted here, so the discrete
  // convolution needs no further normalization factors.
  for (int k = 0; k < t.pq; ++k) {
    const double uk = signed_frequency(k, t.pq, g.dq());
    for (int l = 0; l < t.pp; ++l) {
      const double vl = signed_frequency(l, t.pp, g.dp());
      t.data[static_cast<std::size_t>(k) * t.pp + l] *=
          std::exp(-0.25 * (uk * uk + vl * vl));
    }
  }
  transform_in_place(t.data, t.pq, t.pp, FFTW_BACKWARD);

  PhaseSpaceField out(g, FieldKind::husimi);
  const double inv = 1.0 / (static_cast<double>(t.pq) * t.pp);
  double min_value = 0.0;
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.np; ++j) {
      const double v = t.data[static_cast<std::size_t>(i) * t.pp + j].real() * inv;
      out(i, j) = v;
      min_value = std::min(min_value, v);
    }
  if (min_value < -1e-12)
    throw std::runtime_error(
        "smooth_to_husimi: smoothed field dips below the -1e-12 floor; input is not a "
        "valid Wigner field on this grid");
  return out;
}

double spectral_roughness(const PhaseSpaceField& w) {
  if (w.kind() != FieldKind::wigner)
    throw std::invalid_argument("spectral_roughness: field kind must be Wigner");
  require_decayed(w, "spectral_roughness");

  const auto& g = w.grid();
  PaddedTransform t = forward_padded(w);

  detail::CompensatedSum sum;
  for (int k = 0; k < t.pq; ++k) {
    const double uk = signed_frequency(k, t.pq, g.dq());
    for (int l = 0; l < t.pp; ++l) {
      const double vl = signed_frequency(l, t.pp, g.dp());
      const double damp = 1.0 - std::exp(-0.25 * (uk * uk + vl * vl));
      sum.add(damp * damp * std::norm(t.data[static_cast<std::size_t>(k) * t.pp + l]));
    }
  }
  const double r2 =
      2.0 * kPi * g.dq() * g.dp() / (static_cast<double>(t.pq) * t.pp) * sum.value();
  return std::sqrt(r2);
}

}  // namespace rough
