#ifndef ROUGH_SPECFUN_HPP
#define ROUGH_SPECFUN_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

namespace rough::specfun {

/// Arbitrary-precision non-negative integer; exact at every index used by the
/// combinatorial identities (factorials and binomials up to n = 400 in tests).
class BigUInt {
 public:
  BigUInt() : v_(0) {}
  BigUInt(unsigned long v) : v_(v) {}  // NOLINT: implicit by design
  explicit BigUInt(mpz_class v);       // must be >= 0

  BigUInt& operator+=(const BigUInt& o);
  BigUInt& operator-=(const BigUInt& o);  // throws std::domain_error if o > *this
  BigUInt& operator*=(const BigUInt& o);
  BigUInt& operator*=(unsigned long o);

  friend BigUInt operator+(BigUInt a, const BigUInt& b) { return a += b; }
  friend BigUInt operator-(BigUInt a, const BigUInt& b) { return a -= b; }
  friend BigUInt operator*(BigUInt a, const BigUInt& b) { return a *= b; }

  friend bool operator==(const BigUInt& a, const BigUInt& b) { return a.v_ == b.v_; }
  friend bool operator!=(const BigUInt& a, const BigUInt& b) { return a.v_ != b.v_; }
  friend bool operator<(const BigUInt& a, const BigUInt& b) { return a.v_ < b.v_; }
  friend bool operator<=(const BigUInt& a, const BigUInt& b) { return a.v_ <= b.v_; }
  friend bool operator>(const BigUInt& a, const BigUInt& b) { return a.v_ > b.v_; }
  friend bool operator>=(const BigUInt& a, const BigUInt& b) { return a.v_ >= b.v_; }

  bool is_zero() const { return v_ == 0; }
  double to_double() const;  // may round; +inf on overflow
  double log() const;        // natural log; throws std::domain_error on zero
  std::string to_string() const;

  const mpz_class& raw() const { return v_; }

  static BigUInt factorial(unsigned n);
  static BigUInt binomial(unsigned n, unsigned k);  // 0 when k > n
  static BigUInt pow(unsigned long base, unsigned exp);

 private:
  mpz_class v_;
};

/// values[n] = ln(n!); exact 0 at n = 0, strictly increasing thereafter.
struct LogFactorialTable {
  int max_n;
  std::vector<double> values;
};

/// Shared table, built once on first use; log-gamma continuation above max_n.
const LogFactorialTable& log_factorial_table();

/// L_n(x) by the upward three-term recurrence.
double laguerre(int n, double x);

/// Associated L_n^k(x); assoc_laguerre(n, 0, x) == laguerre(n, x).
double assoc_laguerre(int n, int k, double x);

/// Unsigned Stirling numbers of the first kind, {n brack k}; 0 for k > n.
BigUInt stirling_first_unsigned(int n, int k);

/// Stirling numbers of the second kind, {n brace k}; 0 for k > n.
BigUInt stirling_second(int n, int k);

/// Sum_{k=j}^{n} {n+1 brack k+1} {k brace j}; equals (n-j)! C(n,j)^2.
BigUInt stirling_identity_lhs(int n, int j);

/// P_n(t) = Sum_j C(n,j)^2 t^(2j).
double binom_square_poly(int n, double t);

/// B_n = [2^(-2n) C(2n,n)]^(-1) 9^(-n) P_n(2); exact-rational evaluation.
double bn_ratio(int n);

/// ln(n!) to 1e-12 relative.
double log_factorial(int n);

/// 2^(-2n) C(2n,n); exact for small n, log-domain above.
double central_binom_scaled(int n);

}  // namespace rough::specfun

#endif
