#include "rough/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace rough {

namespace {

constexpr double kTolTruncate = 1e-8;
constexpr double kTolTrace = 1e-10;
constexpr double kTolOffdiag = 1e-10;
constexpr int kMaxSuggestedDim = 1 << 20;

}  // namespace

FockDensityMatrix::FockDensityMatrix(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("FockDensityMatrix: dim must be >= 1");
  a_.assign(static_cast<size_t>(dim) * dim, complexd(0.0, 0.0));
}

complexd FockDensityMatrix::at(int n, int m) const {
  if (n < 0 || m < 0 || n >= dim_ || m >= dim_)
    throw std::out_of_range("FockDensityMatrix::at: index outside truncation");
  return (*this)(n, m);
}

void FockDensityMatrix::set_hermitian_pair(int n, int m, complexd v) {
  if (n < 0 || m < 0 || n >= dim_ || m >= dim_)
    throw std::out_of_range("FockDensityMatrix::set_hermitian_pair: index outside truncation");
  if (n == m) {
    if (std::fabs(v.imag()) > 1e-12)
      throw std::invalid_argument("FockDensityMatrix: diagonal entry must be real");
    a_[static_cast<size_t>(n) * dim_ + n] = complexd(v.real(), 0.0);
    return;
  }
  a_[static_cast<size_t>(n) * dim_ + m] = v;
  a_[static_cast<size_t>(m) * dim_ + n] = std::conj(v);
}

double FockDensityMatrix::trace() const {
  double t = 0.0;
  for (int n = 0; n < dim_; ++n) t += (*this)(n, n).real();
  return t;
}

void FockDensityMatrix::scale(double factor) {
  for (auto& v : a_) v *= factor;
}

double FockDensityMatrix::hermiticity_residue() const {
  double r = 0.0;
  for (int n = 0; n < dim_; ++n)
    for (int m = n; m < dim_; ++m)
      r = std::max(r, std::abs((*this)(n, m) - std::conj((*this)(m, n))));
  return r;
}

double FockDensityMatrix::max_offdiagonal() const {
  double r = 0.0;
  for (int n = 0; n < dim_; ++n)
    for (int m = 0; m < dim_; ++m)
      if (n != m) r = std::max(r, std::abs((*this)(n, m)));
  return r;
}

FockDensityMatrix make_fock(int n, int dim) {
  if (n < 0) throw std::invalid_argument("make_fock: n must be >= 0");
  if (n >= dim)
    throw TruncationError("make_fock: level outside truncation", n + 1);
  FockDensityMatrix rho(dim);
  rho.set_hermitian_pair(n, n, 1.0);
  return rho;
}

int suggested_dim_coherent(complexd alpha) {
  const double mu = std::norm(alpha);  // Poisson mean
  if (mu == 0.0) return 1;
  double log_p = -mu;  // ln P(0)
  double tail = 1.0;   // 1 - CDF(n-1), running
  for (int n = 0; n < kMaxSuggestedDim; ++n) {
    tail -= std::exp(log_p);
    if (tail < kTolTruncate) return n + 1;
    log_p += std::log(mu) - std::log(n + 1.0);
  }
  return kMaxSuggestedDim;
}

FockDensityMatrix make_coherent(complexd alpha, int dim) {
  std::vector<complexd> c(dim);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n + 1 < dim; ++n) c[n + 1] = c[n] * alpha / std::sqrt(n + 1.0);
  double captured = 0.0;
  for (const auto& v : c) captured += std::norm(v);
  if (1.0 - captured > kTolTruncate) {
    std::ostringstream msg;
    msg << "make_coherent: dim " << dim << " captures only " << captured << " of the state";
    throw TruncationError(msg.str(), suggested_dim_coherent(alpha));
  }
  FockDensityMatrix rho(dim);
  for (int n = 0; n < dim; ++n)
    for (int m = n; m < dim; ++m)
      rho.set_hermitian_pair(m, n, c[m] * std::conj(c[n]) / captured);
  return rho;
}

int suggested_dim_thermal(double nbar) {
  if (nbar <= 0.0) return 1;
  const double x = nbar / (nbar + 1.0);  // tail beyond dim d is x^d
  const int d = static_cast<int>(std::ceil(std::log(kTolTruncate) / std::log(x)));
  return std::max(1, d);
}

FockDensityMatrix make_thermal(double nbar, int dim) {
  if (nbar < 0.0) throw std::invalid_argument("make_thermal: nbar must be >= 0");
  FockDensityMatrix rho(dim);
  if (nbar == 0.0) {
    rho.set_hermitian_pair(0, 0, 1.0);
    return rho;
  }
  const double x = nbar / (nbar + 1.0);
  const double tail = std::pow(x, dim);
  if (tail > kTolTruncate) {
    std::ostringstream msg;
    msg << "make_thermal: geometric tail " << tail << " at dim " << dim << " above tolerance";
    throw TruncationError(msg.str(), suggested_dim_thermal(nbar));
  }
  const double norm = (1.0 - x) / (1.0 - tail);  // renormalized over the kept block
  double p = norm;
  for (int n = 0; n < dim; ++n) {
    rho.set_hermitian_pair(n, n, p);
    p *= x;
  }
  return rho;
}

FockDensityMatrix make_diagonal(int m, int dim) {
  if (m < 0) throw std::invalid_argument("make_diagonal: m must be >= 0");
  if (m >= dim)
    throw TruncationError("make_diagonal: level outside truncation", m + 1);
  FockDensityMatrix rho(dim);
  for (int n = 0; n <= m; ++n) rho.set_hermitian_pair(n, n, 1.0 / (m + 1.0));
  return rho;
}

double nbar_from_beta(double beta) {
  if (beta <= 0.0) throw std::domain_error("nbar_from_beta: beta must be > 0");
  return 1.0 / std::expm1(beta);
}

FockDensityMatrix random_density_matrix(std::uint64_t seed, int dim) {
  if (dim < 1) throw std::invalid_argument("random_density_matrix: dim must be >= 1");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<complexd> b(static_cast<size_t>(dim) * dim);
  for (auto& v : b) {
    const double re = u(gen);
    const double im = u(gen);
    v = complexd(re, im);
  }
  FockDensityMatrix rho(dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = n; m < dim; ++m) {
      complexd s(0.0, 0.0);
      for (int k = 0; k < dim; ++k)
        s += b[static_cast<size_t>(n) * dim + k] * std::conj(b[static_cast<size_t>(m) * dim + k]);
      if (n == m) s = complexd(s.real(), 0.0);
      rho.set_hermitian_pair(n, m, s);
    }
  }
  rho.scale(1.0 / rho.trace());
  return rho;
}

FockDensityMatrix make_mixture(const MixtureSpec& spec, int dim) {
  if (spec.M < 0) throw std::invalid_argument("make_mixture: M must be >= 0");
  return mix(make_thermal(nbar_from_beta(spec.beta), dim), make_fock(spec.M, dim), spec.z);
}

FockDensityMatrix mix(const FockDensityMatrix& rho1, const FockDensityMatrix& rho2, double z) {
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("mix: dimension mismatch");
  if (z < 0.0 || z > 1.0) throw std::invalid_argument("mix: z must lie in [0,1]");
  FockDensityMatrix out(rho1.dim());
  for (int n = 0; n < rho1.dim(); ++n)
    for (int m = n; m < rho1.dim(); ++m)
      out.set_hermitian_pair(n, m, (1.0 - z) * rho1(n, m) + z * rho2(n, m));
  return out;
}

double mean_photon(const FockDensityMatrix& rho) {
  double s = 0.0;
  for (int n = 0; n < rho.dim(); ++n) s += n * rho(n, n).real();
  return s;
}

double purity(const FockDensityMatrix& rho) {
  double s = 0.0;
  for (int n = 0; n < rho.dim(); ++n)
    for (int m = 0; m < rho.dim(); ++m) s += std::norm(rho(n, m));
  return s;
}

double linear_entropy(const FockDensityMatrix& rho) { return 1.0 - purity(rho); }

double entropy_diagonal(const FockDensityMatrix& rho) {
  if (rho.max_offdiagonal() >= kTolOffdiag)
    throw std::invalid_argument(
        "entropy_diagonal: state is not diagonal; refusing to diagonalize silently");
  double s = 0.0;
  for (int n = 0; n < rho.dim(); ++n) {
    const double p = rho(n, n).real();
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double fidelity(const FockDensityMatrix& rho1, const FockDensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  double overlap = 0.0;  // Tr(rho1 rho2) = Sum A1[n][m] conj(A2[n][m]) for Hermitian A2
  for (int n = 0; n < rho1.dim(); ++n)
    for (int m = 0; m < rho1.dim(); ++m)
      overlap += (rho1(n, m) * std::conj(rho2(n, m))).real();
  const double p1 = purity(rho1);
  if (p1 <= 0.0) throw std::domain_error("fidelity: Tr(rho1^2) must be positive");
  return overlap / p1;
}

double zmax_scan(double beta, int M, std::span<const double> z_grid, int dim) {
  if (z_grid.empty()) throw std::invalid_argument("zmax_scan: empty z grid");
  for (size_t i = 0; i < z_grid.size(); ++i) {
    if (z_grid[i] < 0.0 || z_grid[i] > 1.0)
      throw std::invalid_argument("zmax_scan: z values must lie in [0,1]");
    if (i > 0 && z_grid[i] < z_grid[i - 1])
      throw std::invalid_argument("zmax_scan: z grid must be sorted");
  }
  const double nbar = nbar_from_beta(beta);
  if (dim <= 0) dim = std::max({M + 1, suggested_dim_thermal(nbar), 16});
  const FockDensityMatrix th = make_thermal(nbar, dim);
  const FockDensityMatrix fk = make_fock(M, dim);
  double best_z = z_grid[0];
  double best_s = -1.0;
  for (const double z : z_grid) {
    const double s = entropy_diagonal(mix(th, fk, z));
    if (s > best_s) {  // strict: ties keep the earlier (smaller) z
      best_s = s;
      best_z = z;
    }
  }
  return best_z;
}

std::string to_json_string(const FockDensityMatrix& rho) {
  nlohmann::json j;
  j["dim"] = rho.dim();
  nlohmann::json coeffs = nlohmann::json::array();
  for (int n = 0; n < rho.dim(); ++n)
    for (int m = 0; m < rho.dim(); ++m)
      coeffs.push_back({rho(n, m).real(), rho(n, m).imag()});
  j["coeffs"] = std::move(coeffs);
  return j.dump();
}

FockDensityMatrix state_from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("dim") || !j.contains("coeffs"))
    throw std::invalid_argument("state JSON must contain 'dim' and 'coeffs'");
  const int dim = j["dim"].get<int>();
  if (dim < 1) throw std::invalid_argument("state JSON: dim must be >= 1");
  const auto& coeffs = j["coeffs"];
  if (static_cast<int>(coeffs.size()) != dim * dim)
    throw std::invalid_argument("state JSON: coeffs must have dim^2 entries");
  std::vector<complexd> a(coeffs.size());
  for (size_t i = 0; i < a.size(); ++i)
    a[i] = complexd(coeffs[i][0].get<double>(), coeffs[i][1].get<double>());

  FockDensityMatrix rho(dim);
  for (int n = 0; n < dim; ++n) {
    const complexd d = a[static_cast<size_t>(n) * dim + n];
    if (std::fabs(d.imag()) > kTolOffdiag)
      throw std::invalid_argument("state JSON: diagonal entries must be real");
    if (d.real() < -1e-12)
      throw std::invalid_argument("state JSON: negative diagonal probability");
    for (int m = n + 1; m < dim; ++m) {
      const complexd up = a[static_cast<size_t>(n) * dim + m];
      const complexd lo = a[static_cast<size_t>(m) * dim + n];
      if (std::abs(up - std::conj(lo)) > kTolOffdiag)
        throw std::invalid_argument("state JSON: matrix is not Hermitian");
      rho.set_hermitian_pair(n, m, 0.5 * (up + std::conj(lo)));
    }
    rho.set_hermitian_pair(n, n, d.real());
  }
  const double tr = rho.trace();
  if (std::fabs(tr - 1.0) > 1e-6)
    throw std::invalid_argument("state JSON: trace departs from 1 beyond 1e-6");
  rho.scale(1.0 / tr);
  if (std::fabs(rho.trace() - 1.0) > kTolTrace)
    throw std::invalid_argument("state JSON: renormalization failed");
  return rho;
}

}  // namespace rough
