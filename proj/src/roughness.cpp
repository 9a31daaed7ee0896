#include "rough/roughness.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "internal_util.hpp"
#include "rough/specfun.hpp"

namespace rough {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kLn3 = 1.0986122886681096913952452369225257;
constexpr double kLn43 = kLn2 + kLn2 - kLn3;  // ln(4/3)
constexpr double kCancellationGuard = 1e-9;
constexpr double kNegativeSquareTol = 1e-9;

double log_abs(const mpz_class& value) {
  signed long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, value.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * kLn2;
}

// Exact alternating sum  sum_j (-1)^j C(X, Y-j) C(G+j, j) 4^j 3^{Y-j},
// maintained incrementally with exact divisions only.
mpz_class exact_alternating_sum(int X, int Y, int G) {
  mpz_class b1 = specfun::BigUInt::binomial(X, Y).raw();  // C(X, Y-j)
  mpz_class b2 = 1;                                       // C(G+j, j)
  mpz_class pow4 = 1;
  mpz_class pow3;
  mpz_ui_pow_ui(pow3.get_mpz_t(), 3, static_cast<unsigned long>(Y));
  mpz_class sum = 0;
  mpz_class term;
  for (int j = 0; j <= Y; ++j) {
    term = b1 * b2 * pow4 * pow3;
    if (j % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
    if (j == Y) break;
    // C(X, Y-j-1) = C(X, Y-j) (Y-j) / (X-Y+j+1)
    b1 *= Y - j;
    mpz_divexact_ui(b1.get_mpz_t(), b1.get_mpz_t(),
                    static_cast<unsigned long>(X - Y + j + 1));
    // C(G+j+1, j+1) = C(G+j, j) (G+j+1) / (j+1)
    b2 *= G + j + 1;
    mpz_divexact_ui(b2.get_mpz_t(), b2.get_mpz_t(),
                    static_cast<unsigned long>(j + 1));
    pow4 <<= 2;
    mpz_divexact_ui(pow3.get_mpz_t(), pow3.get_mpz_t(), 3);
  }
  return sum;
}

}  // namespace

namespace detail {

double psi_psi_entry(int k, int m, int mp) {
  const auto& lf = specfun::log_factorial_table().values;
  const int n = m + k;
  const int np = mp + k;
  const int s = m + mp + k;
  return std::exp(-(s + 1) * kLn2 + lf[s] -
                  0.5 * (lf[n] + lf[m] + lf[np] + lf[mp]));
}

struct CrossEntryContext {
  int X, Y, Xp, Yp, G;
  double sign_y;
  double log_pre;

  CrossEntryContext(int k, int m, int mp)
      : X(m + k),        // Wigner kernel upper index
        Y(m),            // Wigner kernel lower index
        Xp(mp + k),      // Husimi kernel upper index
        Yp(mp),          // Husimi kernel lower index
        G(Xp),
        sign_y((Y % 2 == 0) ? 1.0 : -1.0) {
    const auto& lf = specfun::log_factorial_table().values;
    log_pre =
        0.5 * (lf[Y] - lf[X] - lf[Xp] - lf[Yp]) + (X - Y) * kLn2 - G * kLn3;
  }

  // lambda_j = ln C(X, Y-j) + ln((G+j)!/j!) + j ln(4/3)
  double lambda(int j) const {
    const auto& lf = specfun::log_factorial_table().values;
    return (lf[X] - lf[Y - j] - lf[X - Y + j]) + (lf[G + j] - lf[j]) +
           j * kLn43;
  }

  double lambda_max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= Y; ++j) m = std::max(m, lambda(j));
    return m;
  }
};

double pi_psi_entry(int k, int m, int mp, bool force_exact) {
  const auto& lf = specfun::log_factorial_table().values;
  const CrossEntryContext c(k, m, mp);

  if (!force_exact) {
    const double lambda_max = c.lambda_max();
    rough::detail::CompensatedSum signed_sum;
    rough::detail::CompensatedSum abs_sum;
    for (int j = 0; j <= c.Y; ++j) {
      const double t = std::exp(c.lambda(j) - lambda_max);
      abs_sum.add(t);
      signed_sum.add((j % 2 == 0) ? t : -t);
    }
    const double s = signed_sum.value();
    if (std::fabs(s) > kCancellationGuard * abs_sum.value()) {
      return (2.0 / 3.0) * c.sign_y * std::exp(c.log_pre + lambda_max) * s;
    }
  }

  // Exact fallback: pull G! and 3^{-Y} out of the sum so every term is an
  // integer, then restore them in the log-domain prefactor.
  const mpz_class sum = exact_alternating_sum(c.X, c.Y, c.G);
  const int sgn = mpz_sgn(sum.get_mpz_t());
  if (sgn == 0) return 0.0;
  const double log_value = c.log_pre - c.Y * kLn3 + lf[c.G] + log_abs(sum);
  return (2.0 / 3.0) * c.sign_y * sgn * std::exp(log_value);
}

double pi_psi_entry_unsigned(int k, int m, int mp) {
  const CrossEntryContext c(k, m, mp);
  const double lambda_max = c.lambda_max();
  rough::detail::CompensatedSum abs_sum;
  for (int j = 0; j <= c.Y; ++j) abs_sum.add(std::exp(c.lambda(j) - lambda_max));
  return (2.0 / 3.0) * std::exp(c.log_pre + lambda_max) * abs_sum.value();
}

}  // namespace detail

double fock_cross_term(int n) {
  if (n < 0) throw std::invalid_argument("fock_cross_term: n must be >= 0");
  using specfun::BigUInt;

  // Route 1: alternating form (-1)^n sum_j (-1)^j C(n+j,j) C(n,j) 4^j 3^{n-j}.
  mpz_class alt = exact_alternating_sum(n, n, n);
  if (n % 2 != 0) alt = -alt;

  // Route 2: positive form sum_j C(n,j)^2 4^j.
  mpz_class positive = 0;
  {
    mpz_class pow4 = 1;
    for (int j = 0; j <= n; ++j) {
      const mpz_class b = BigUInt::binomial(n, j).raw();
      positive += b * b * pow4;
      pow4 <<= 2;
    }
  }

  // Route 3: the same sum with C(n,j)^2 recovered from the Stirling-number
  // identity sum_k s1(n+1,k+1) S(k,j) = (n-j)! C(n,j)^2.
  mpz_class stirling = 0;
  {
    mpz_class pow4 = 1;
    for (int j = 0; j <= n; ++j) {
      mpz_class lhs = specfun::stirling_identity_lhs(n, j).raw();
      mpz_divexact(lhs.get_mpz_t(), lhs.get_mpz_t(),
                   BigUInt::factorial(n - j).raw().get_mpz_t());
      stirling += lhs * pow4;
      pow4 <<= 2;
    }
  }

  mpz_class nine_n;
  mpz_ui_pow_ui(nine_n.get_mpz_t(), 9, static_cast<unsigned long>(n));
  const auto to_value = [&](const mpz_class& num) {
    const mpz_class four_num = 4 * num;
    const mpz_class den = 3 * nine_n;
    mpq_class q(four_num, den);
    q.canonicalize();
    return q.get_d();
  };
  const double route1 = to_value(alt);
  const double route2 = to_value(positive);
  const double route3 = to_value(stirling);

  const double scale = std::fabs(route2);
  if (std::fabs(route1 - route2) > 1e-9 * scale ||
      std::fabs(route3 - route2) > 1e-9 * scale) {
    throw std::runtime_error(
        "fock_cross_term: independent evaluation routes disagree at n = " +
        std::to_string(n));
  }
  return route2;
}

RoughnessBreakdown roughness_fock(int n) {
  if (n < 0) throw std::invalid_argument("roughness_fock: n must be >= 0");
  RoughnessBreakdown out;
  out.r2_w2 = 1.0;
  out.r2_q2 = 0.5 * specfun::central_binom_scaled(n);
  out.r2_wq = fock_cross_term(n);
  out.r = std::sqrt(out.r2_w2 + out.r2_q2 - out.r2_wq);
  return out;
}

double roughness_squeezed(double zeta) {
  if (!std::isfinite(zeta)) {
    throw std::invalid_argument("roughness_squeezed: zeta must be finite");
  }
  const double a = std::exp(zeta);
  const double b = std::exp(-zeta);
  const double r2 =
      1.0 + 0.5 / std::cosh(zeta) - 4.0 / std::sqrt((a + 2.0 * b) * (2.0 * a + b));
  return std::sqrt(r2);
}

double roughness_cat(double q0, CatParity parity) {
  if (!(q0 >= 0.0)) {
    throw std::invalid_argument("roughness_cat: q0 must be >= 0");
  }
  if (parity == CatParity::odd && q0 == 0.0) {
    throw std::domain_error("roughness_cat: odd superposition vanishes at q0 = 0");
  }
  const double x = q0 * q0;
  double r2 = 0.0;
  if (parity == CatParity::even) {
    const double e1 = std::exp(-x);
    const double ratio = (1.0 + std::exp(-x / 3.0)) / (1.0 + e1);
    r2 = 7.0 / 12.0 + e1 / ((1.0 + e1) * (1.0 + e1)) -
         (2.0 / 3.0) * std::exp(-2.0 * x / 3.0) * ratio * ratio;
  } else {
    // expm1 keeps the interference ratio accurate as q0 -> 0+.
    const double ratio = std::expm1(-x / 3.0) / std::expm1(-x);
    r2 = 7.0 / 12.0 -
         (2.0 / 3.0) * std::exp(-2.0 * x / 3.0) * ratio * ratio;
  }
  return std::sqrt(r2);
}

double roughness_thermal(double nbar) {
  if (!(nbar >= 0.0)) {
    throw std::invalid_argument("roughness_thermal: nbar must be >= 0");
  }
  return std::sqrt(0.5 / ((nbar + 1.0) * (2.0 * nbar + 1.0) * (4.0 * nbar + 3.0)));
}

IntegralTensorCache::IntegralTensorCache(int dim) : dim_(dim) {
  if (dim < 1) {
    throw std::invalid_argument("IntegralTensorCache: dim must be >= 1");
  }
  // Entry formulas index ln(n!) up to 2*dim - 2; stay inside the shared table.
  if (2 * dim - 2 > specfun::log_factorial_table().max_n) {
    throw std::invalid_argument("IntegralTensorCache: dim too large");
  }
  // Warm the shared log-factorial table before the worker threads touch it.
  (void)specfun::log_factorial_table();
  psi_.resize(static_cast<std::size_t>(dim));
  cross_.resize(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    const std::size_t side = static_cast<std::size_t>(dim - k);
    psi_[k].assign(side * side, 0.0);
    cross_[k].assign(side * side, 0.0);
    auto& psi_block = psi_[k];
    auto& cross_block = cross_[k];
    rough::detail::parallel_for_blocks(dim - k, [&](int begin, int end) {
      for (int m = begin; m < end; ++m) {
        for (int mp = 0; mp < dim - k; ++mp) {
          psi_block[static_cast<std::size_t>(m) * side + mp] =
              detail::psi_psi_entry(k, m, mp);
          cross_block[static_cast<std::size_t>(m) * side + mp] =
              detail::pi_psi_entry(k, m, mp);
        }
      }
    });
  }
}

IntegralTensorCache build_tensor_cache(int dim) {
  return IntegralTensorCache(dim);
}

RoughnessBreakdown roughness_general(const FockDensityMatrix& rho,
                                     const IntegralTensorCache& cache) {
  const int dim = rho.dim();
  if (dim > cache.dim()) {
    throw std::invalid_argument(
        "roughness_general: cache dimension " + std::to_string(cache.dim()) +
        " is smaller than the state dimension " + std::to_string(dim));
  }

  rough::detail::CompensatedSum q2_sum;
  rough::detail::CompensatedSum wq_sum;
  std::vector<int> active;
  std::vector<complexd> coef;
  for (int k = 0; k < dim; ++k) {
    active.clear();
    coef.clear();
    for (int m = 0; m + k < dim; ++m) {
      const complexd a = rho(m + k, m);
      if (a != complexd(0.0, 0.0)) {
        active.push_back(m);
        coef.push_back(a);
      }
    }
    if (active.empty()) continue;
    // Offsets +k and -k are complex-conjugate mirrors, so each k > 0 block
    // contributes twice its real part.
    const double weight = (k == 0) ? 1.0 : 2.0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = 0; j < active.size(); ++j) {
        const double re = coef[i].real() * coef[j].real() +
                          coef[i].imag() * coef[j].imag();
        if (re == 0.0) continue;
        const int m = active[i];
        const int mp = active[j];
        q2_sum.add(weight * re * cache.psi_psi(k, m, mp));
        wq_sum.add(weight * re * 2.0 * cache.pi_psi(k, m, mp));
      }
    }
  }

  RoughnessBreakdown out;
  out.r2_w2 = purity(rho);
  out.r2_q2 = q2_sum.value();
  out.r2_wq = wq_sum.value();
  double r2 = out.r2_w2 + out.r2_q2 - out.r2_wq;
  if (r2 < 0.0) {
    if (r2 < -kNegativeSquareTol) {
      throw std::runtime_error(
          "roughness_general: squared distance " + std::to_string(r2) +
          " is negative beyond the numerical-consistency window");
    }
    r2 = 0.0;
  }
  out.r = std::sqrt(r2);
  return out;
}

}  // namespace rough
