#ifndef ROUGH_ROUGHNESS_HPP
#define ROUGH_ROUGHNESS_HPP

#include <vector>

#include "rough/states.hpp"

namespace rough {

// R^2 = r2_w2 + r2_q2 - r2_wq, the three quadratic pieces of the distance
// 2*pi*integral((W-Q)^2): the Wigner purity term, the Husimi purity term,
// and twice the cross overlap.  r is the assembled square root.
struct RoughnessBreakdown {
  double r2_w2 = 0.0;
  double r2_q2 = 0.0;
  double r2_wq = 0.0;
  double r = 0.0;
};

enum class CatParity { even, odd };

// Closed forms per family -------------------------------------------------

// r2_w2 = 1, r2_q2 = C(2n,n)/2^{2n+1}, r2_wq = (4/3) 9^{-n} sum C(n,j)^2 4^j.
RoughnessBreakdown roughness_fock(int n);

// Bracket form stable for all zeta:
//   R^2 = 1 + 1/(2 cosh zeta) - 4/sqrt((e^z + 2e^{-z})(2e^z + e^{-z})),
// exactly symmetric under zeta -> -zeta.
double roughness_squeezed(double zeta);

// Even/odd superposition of +/- q0 coherent states; odd requires q0 > 0.
double roughness_cat(double q0, CatParity parity);

// R = sqrt(1/2 / ((nbar+1)(2 nbar+1)(4 nbar+3))).
double roughness_thermal(double nbar);

// The cross term of the Fock closed form, computed three independent ways
// (alternating hypergeometric sum, positive binomial-square sum, and the
// Stirling-number route) in exact integer arithmetic; returns the positive
// form after asserting three-way agreement to 1e-9 relative.
double fock_cross_term(int n);

// Pairing integrals of the Fock dyad kernels --------------------------------
//
// Only quadruples with n - m = n' - m' survive the angular integral, so the
// cache stores (k = n - m, m, m') blocks.  The Wigner-Wigner pairing is the
// identity and is never stored.  Cross-pairing entries carry an alternating
// sum evaluated in compensated log-domain arithmetic, falling back to exact
// big-integer evaluation when the estimated cancellation exceeds 1e9.
class IntegralTensorCache {
 public:
  explicit IntegralTensorCache(int dim);

  int dim() const { return dim_; }

  // 2*pi * integral of the Husimi kernel pair (m+k, m) x (m'+k, m').
  double psi_psi(int k, int m, int mp) const {
    return psi_[k][static_cast<std::size_t>(m) * (dim_ - k) + mp];
  }
  // 2*pi * integral of Wigner kernel (m+k, m) against Husimi kernel (m'+k, m').
  double pi_psi(int k, int m, int mp) const {
    return cross_[k][static_cast<std::size_t>(m) * (dim_ - k) + mp];
  }
  // The mirrored pairing exchanges primed and unprimed indices.
  double psi_pi(int k, int m, int mp) const { return pi_psi(k, mp, m); }

 private:
  int dim_;
  std::vector<std::vector<double>> psi_;
  std::vector<std::vector<double>> cross_;
};

IntegralTensorCache build_tensor_cache(int dim);

// Quadruple sum over the cached pairings, restricted to the surviving
// diagonal offsets.  r^2 values in [-1e-9, 0) clamp to zero; anything more
// negative signals an inconsistency and throws.
RoughnessBreakdown roughness_general(const FockDensityMatrix& rho,
                                     const IntegralTensorCache& cache);

namespace detail {
// Single cross-pairing entry; force_exact bypasses the cancellation guard
// so tests can compare the two evaluation paths on the same indices.
double pi_psi_entry(int k, int m, int mp, bool force_exact = false);
// Unsigned magnitude of the alternating term pile behind the same entry;
// the log-domain path's absolute error scales with this, not with the value.
double pi_psi_entry_unsigned(int k, int m, int mp);
double psi_psi_entry(int k, int m, int mp);
}  // namespace detail

}  // namespace rough

#endif
