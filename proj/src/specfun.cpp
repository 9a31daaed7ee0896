#include "rough/specfun.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace rough::specfun {

BigUInt::BigUInt(mpz_class v) : v_(std::move(v)) {
  if (v_ < 0) throw std::domain_error("BigUInt: negative value");
}

BigUInt& BigUInt::operator+=(const BigUInt& o) {
  v_ += o.v_;
  return *this;
}

BigUInt& BigUInt::operator-=(const BigUInt& o) {
  if (o.v_ > v_) throw std::domain_error("BigUInt: subtraction would go negative");
  v_ -= o.v_;
  return *this;
}

BigUInt& BigUInt::operator*=(const BigUInt& o) {
  v_ *= o.v_;
  return *this;
}

BigUInt& BigUInt::operator*=(unsigned long o) {
  v_ *= o;
  return *this;
}

double BigUInt::to_double() const { return v_.get_d(); }

double BigUInt::log() const {
  if (v_ == 0) throw std::domain_error("BigUInt::log of zero");
  signed long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v_.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

std::string BigUInt::to_string() const { return v_.get_str(); }

BigUInt BigUInt::factorial(unsigned n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return BigUInt(std::move(r));
}

BigUInt BigUInt::binomial(unsigned n, unsigned k) {
  if (k > n) return BigUInt(0ul);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return BigUInt(std::move(r));
}

BigUInt BigUInt::pow(unsigned long base, unsigned exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return BigUInt(std::move(r));
}

namespace {

constexpr int kLogFactTableMax = 4096;

const LogFactorialTable& built_table() {
  static const LogFactorialTable table = [] {
    LogFactorialTable t;
    t.max_n = kLogFactTableMax;
    t.values.resize(kLogFactTableMax + 1);
    t.values[0] = 0.0;
    for (int n = 1; n <= kLogFactTableMax; ++n) t.values[n] = std::lgamma(n + 1.0);
    return t;
  }();
  return table;
}

// Memoized exact Stirling triangles; rows appended under lock, rows themselves
// immutable once written.
class StirlingTriangle {
 public:
  explicit StirlingTriangle(bool first_kind) : first_kind_(first_kind) {
    rows_.push_back({mpz_class(1)});  // {0,0} = 1 for both kinds
  }

  mpz_class value(int n, int k) {
    if (k > n) return mpz_class(0);
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<int>(rows_.size()) <= n) {
      const int m = static_cast<int>(rows_.size()) - 1;  // extending row m -> m+1
      const auto& prev = rows_.back();
      std::vector<mpz_class> row(m + 2);
      row[0] = 0;
      for (int j = 1; j <= m + 1; ++j) {
        const mpz_class& up = (j <= m) ? prev[j] : kZero;
        const mpz_class& upleft = prev[j - 1];
        row[j] = first_kind_ ? mpz_class(mpz_class(m) * up + upleft)
                             : mpz_class(mpz_class(j) * up + upleft);
      }
      rows_.push_back(std::move(row));
    }
    return rows_[n][k];
  }

 private:
  static const mpz_class kZero;
  bool first_kind_;
  std::mutex mu_;
  std::vector<std::vector<mpz_class>> rows_;
};

const mpz_class StirlingTriangle::kZero = 0;

StirlingTriangle& first_kind_triangle() {
  static StirlingTriangle t(true);
  return t;
}

StirlingTriangle& second_kind_triangle() {
  static StirlingTriangle t(false);
  return t;
}

}  // namespace

const LogFactorialTable& log_factorial_table() { return built_table(); }

double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative n");
  const auto& t = built_table();
  if (n <= t.max_n) return t.values[n];
  return std::lgamma(n + 1.0);
}

double laguerre(int n, double x) { return assoc_laguerre(n, 0, x); }

double assoc_laguerre(int n, int k, double x) {
  if (n < 0 || k < 0) throw std::domain_error("assoc_laguerre: negative order");
  if (n == 0) return 1.0;
  double lm1 = 1.0;            // L_0^k
  double l = 1.0 + k - x;      // L_1^k
  for (int m = 1; m < n; ++m) {
    const double lp1 = ((2.0 * m + k + 1.0 - x) * l - (m + k) * lm1) / (m + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

BigUInt stirling_first_unsigned(int n, int k) {
  if (n < 0 || k < 0) throw std::domain_error("stirling_first_unsigned: negative argument");
  return BigUInt(first_kind_triangle().value(n, k));
}

BigUInt stirling_second(int n, int k) {
  if (n < 0 || k < 0) throw std::domain_error("stirling_second: negative argument");
  return BigUInt(second_kind_triangle().value(n, k));
}

BigUInt stirling_identity_lhs(int n, int j) {
  if (n < 0 || j < 0 || j > n) throw std::domain_error("stirling_identity_lhs: need 0 <= j <= n");
  mpz_class sum = 0;
  for (int k = j; k <= n; ++k)
    sum += first_kind_triangle().value(n + 1, k + 1) * second_kind_triangle().value(k, j);
  return BigUInt(std::move(sum));
}

double binom_square_poly(int n, double t) {
  if (n < 0) throw std::domain_error("binom_square_poly: negative n");
  if (t == 0.0) return 1.0;
  const double log_t2 = 2.0 * std::log(std::fabs(t));
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double log_binom = log_factorial(n) - log_factorial(j) - log_factorial(n - j);
    sum += std::exp(2.0 * log_binom + j * log_t2);
  }
  return sum;
}

double bn_ratio(int n) {
  if (n < 0) throw std::domain_error("bn_ratio: negative n");
  // B_n = P_n(2) * 4^n / (9^n * C(2n,n)), an exact rational.
  mpz_class num = 0;
  for (int j = 0; j <= n; ++j) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), n, j);
    mpz_class term = c * c;
    mpz_mul_2exp(term.get_mpz_t(), term.get_mpz_t(), 2 * j);  // * 4^j
    num += term;
  }
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), 2 * n);  // * 4^n
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 9, n);
  mpz_class cb;
  mpz_bin_uiui(cb.get_mpz_t(), 2 * n, n);
  den *= cb;
  if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53)
    return num.get_d() / den.get_d();  // both exact doubles: correctly rounded quotient
  mpq_class q(num, den);
  q.canonicalize();
  return q.get_d();
}

double central_binom_scaled(int n) {
  if (n < 0) throw std::domain_error("central_binom_scaled: negative n");
  if (n <= 31) {
    mpz_class cb;
    mpz_bin_uiui(cb.get_mpz_t(), 2 * n, n);
    return cb.get_d() / std::ldexp(1.0, 2 * n);  // exact: C(62,31) < 2^53
  }
  return std::exp(log_factorial(2 * n) - 2.0 * log_factorial(n) - 2.0 * n * M_LN2);
}

}  // namespace rough::specfun
