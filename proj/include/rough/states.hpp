#ifndef ROUGH_STATES_HPP
#define ROUGH_STATES_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rough {

using complexd = std::complex<double>;

/// Thrown by constructors when the requested dim captures less than
/// 1 - 1e-8 of the state's probability; suggested_dim is the smallest
/// truncation that would pass.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_dim(suggested) {}
  int suggested_dim;
};

/// Truncated Fock-basis density matrix A[n][m], 0 <= n,m < dim.
/// Hermitian by construction: writes always set (n,m) and (m,n) together.
class FockDensityMatrix {
 public:
  explicit FockDensityMatrix(int dim);

  int dim() const { return dim_; }
  complexd operator()(int n, int m) const { return a_[static_cast<size_t>(n) * dim_ + m]; }
  complexd at(int n, int m) const;  // bounds-checked

  /// Sets A[n][m] = v and A[m][n] = conj(v); diagonal values must be real
  /// to within 1e-12 (imaginary part is rejected, not dropped silently).
  void set_hermitian_pair(int n, int m, complexd v);

  double trace() const;
  void scale(double factor);  // multiplies every coefficient

  /// max |A[n][m] - conj(A[m][n])|; 0 for any matrix built through the setter.
  double hermiticity_residue() const;
  double max_offdiagonal() const;

 private:
  int dim_;
  std::vector<complexd> a_;
};

// --- analytic family descriptors (closed-form W and Q) ---

struct Coherent {
  double q0 = 0.0;
  double p0 = 0.0;
};
struct Squeezed {
  double zeta = 0.0;
};
struct Thermal {
  double nbar = 0.0;
};
struct CatEven {
  double q0 = 0.0;
};
struct CatOdd {
  double q0 = 0.0;  // must be > 0
};

using AnalyticStateSpec = std::variant<Coherent, Squeezed, Thermal, CatEven, CatOdd>;

/// Convex combination (1-z) thermal(beta) + z |M><M|.
struct MixtureSpec {
  double beta;  // > 0
  int M;        // >= 0
  double z;     // in [0,1]
};

// --- constructors (truncation policy: fail loudly, then renormalize) ---

FockDensityMatrix make_fock(int n, int dim);
FockDensityMatrix make_coherent(complexd alpha, int dim);
FockDensityMatrix make_thermal(double nbar, int dim);
FockDensityMatrix make_diagonal(int m, int dim);
FockDensityMatrix make_mixture(const MixtureSpec& spec, int dim);
FockDensityMatrix mix(const FockDensityMatrix& rho1, const FockDensityMatrix& rho2, double z);

/// Mean photon number n(beta) = 1/(e^beta - 1); beta > 0.
double nbar_from_beta(double beta);

/// Deterministic pseudo-random full-rank state: rho = B B^dagger / Tr(B B^dagger)
/// with B entries drawn uniformly from the unit square around 0.
FockDensityMatrix random_density_matrix(std::uint64_t seed, int dim);

/// Smallest dim meeting the 1 - 1e-8 capture policy.
int suggested_dim_thermal(double nbar);
int suggested_dim_coherent(complexd alpha);

// --- scalar quantifiers ---

double mean_photon(const FockDensityMatrix& rho);
double purity(const FockDensityMatrix& rho);          // Tr rho^2
double linear_entropy(const FockDensityMatrix& rho);  // 1 - Tr rho^2

/// -Sum p_n ln p_n over the diagonal; rejects significantly non-diagonal
/// input (off-diagonal magnitude >= 1e-10) instead of diagonalizing.
double entropy_diagonal(const FockDensityMatrix& rho);

/// F = Tr(rho1 rho2) / Tr(rho1^2).
double fidelity(const FockDensityMatrix& rho1, const FockDensityMatrix& rho2);

/// z in the grid maximizing entropy_diagonal(mix(thermal(n(beta)), fock(M), z));
/// ties break toward smaller z. dim = 0 selects the truncation policy default.
double zmax_scan(double beta, int M, std::span<const double> z_grid, int dim = 0);

// --- JSON serialization: {"dim": N, "coeffs": [[re, im], ...]} row-major ---

std::string to_json_string(const FockDensityMatrix& rho);
FockDensityMatrix state_from_json_string(const std::string& text);

}  // namespace rough

#endif
