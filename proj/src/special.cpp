#include "hankelpv/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hankelpv {

Real gamma(const Real& x) {
  if (x.is_integer() && x <= 0)
    throw NumericError(Failure::pole, "Gamma at non-positive integer " + to_decimal(x, 10));
  Real r(Real::uninit, x.prec());
  mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real log_gamma(const Real& x) {
  if (x.is_integer() && x <= 0)
    throw NumericError(Failure::pole, "lnGamma at non-positive integer " + to_decimal(x, 10));
  Real r(Real::uninit, x.prec());
  int sgn = 0;
  mpfr_lgamma(r.raw(), &sgn, x.raw(), MPFR_RNDN);
  return r;
}

namespace {

// Plain series sum at `work` bits; reports the largest term magnitude.
Real phi_series(const Real& a, const Real& b, const Real& z, Bits work, long* max_exp) {
  Real aw = a.with_prec(work), bw = b.with_prec(work), zw = z.with_prec(work);
  Real term(1, work), sum(1, work);
  *max_exp = 1;
  double scale = std::abs(a.to_double()) + std::abs(b.to_double()) + std::abs(z.to_double());
  for (long k = 0;; ++k) {
    Real num = aw + k;
    if (num.is_zero()) break;  // terminating series
    term *= num;
    term *= zw;
    term /= bw + k;
    term /= k + 1;
    sum += term;
    if (!term.is_zero()) *max_exp = std::max(*max_exp, term.exponent());
    if (term.is_zero()) break;
    if (k > scale && (sum.is_zero() || term.exponent() < sum.exponent() - work - 8)) break;
    if (k > 200000) throw NumericError(Failure::non_convergence, "Kummer series did not converge");
  }
  return sum;
}

}  // namespace

Real kummer_phi(const Real& a, const Real& b, const Real& z) {
  Bits bits = std::max({a.prec(), b.prec(), z.prec()});
  if (b.is_integer() && b <= 0) {
    if (!(a.is_integer() && a <= 0 && a >= b))
      throw NumericError(Failure::pole, "Kummer Phi with b a non-positive integer");
  }
  Bits work = bits + 32;
  for (;;) {
    long max_exp = 0;
    Real s = phi_series(a, b, z, work, &max_exp);
    long lost = s.is_zero() ? static_cast<long>(work) : max_exp - s.exponent();
    if (lost < 0) lost = 0;
    if (bits + lost + 16 <= work) return s.with_prec(bits);
    Bits next = bits + lost + 48;
    if (next <= work) next = work + 64;
    if (next > 8 * bits)
      throw NumericError(Failure::cancellation,
                         "Kummer series lost " + std::to_string(lost) + " bits to cancellation");
    work = next;
  }
}

Real bernoulli_even(long j, Bits bits) {
  if (j == 0) return Real(1, bits);
  Bits w = bits + 16;
  Real z(Real::uninit, w);
  mpfr_zeta_ui(z.raw(), static_cast<unsigned long>(2 * j), MPFR_RNDN);
  Real f(Real::uninit, w);
  mpfr_fac_ui(f.raw(), static_cast<unsigned long>(2 * j), MPFR_RNDN);
  Real r = 2 * z * f / pow(2 * Real::pi(w), 2 * j);
  if (j % 2 == 0) r = -r;
  return r.with_prec(bits);
}

Real log_glaisher(Bits bits) {
  Bits w = bits + 32;
  long n = std::max<long>(32, static_cast<long>(bits) / 4);
  Real s(0, w);
  for (long k = 2; k <= n; ++k) {
    Real lk(Real::uninit, w);
    mpfr_log_ui(lk.raw(), static_cast<unsigned long>(k), MPFR_RNDN);
    s += lk * k;
  }
  Real N(n, w);
  Real lnN = log(N);
  Real r = s - (N * N / 2 + N / 2 + Real::from_rational(1, 12, w)) * lnN + N * N / 4;
  Real npow = N * N;  // N^(2j-2) for j = 2
  Real eps = ldexp(Real(1, w), -static_cast<long>(w) - 8);
  for (long j = 2;; ++j) {
    Real term = bernoulli_even(j, w) / (Real(2 * j, w) * (2 * j - 1) * (2 * j - 2)) / npow;
    r += term;
    if (abs(term) < eps) break;
    if (j > 4 * n) throw NumericError(Failure::non_convergence, "Glaisher expansion");
    npow *= N * N;
  }
  return r.with_prec(bits);
}

Real zeta_prime_minus_one(Bits bits) {
  Bits w = bits + 16;
  return (Real::from_rational(1, 12, w) - log_glaisher(w)).with_prec(bits);
}

Real log_barnes_g(const Real& x) {
  Bits bits = x.prec();
  Real twice = x * 2;
  if (!(x > 0) || !twice.is_integer())
    throw UsageError("Barnes G is implemented at positive integers and half-integers only (x=" +
                     to_decimal(x, 12) + ")");
  Bits w = bits + 32;
  long m2 = twice.to_long();
  Real r(0, w);
  if (m2 % 2 == 0) {
    // G(n) = prod_{j=1}^{n-2} j^{n-1-j}
    long n = m2 / 2;
    for (long j = 2; j <= n - 2; ++j) {
      Real lj(Real::uninit, w);
      mpfr_log_ui(lj.raw(), static_cast<unsigned long>(j), MPFR_RNDN);
      r += lj * (n - 1 - j);
    }
  } else {
    // G(1/2) = 2^{1/24} pi^{-1/4} e^{3 zeta'(-1)/2};  G(x+1) = Gamma(x) G(x)
    long m = (m2 - 1) / 2;
    r = Real::ln2(w) / 24 - log(Real::pi(w)) / 4 + zeta_prime_minus_one(w) * 3 / 2;
    for (long k = 0; k < m; ++k) r += log_gamma(Real::from_rational(2 * k + 1, 2, w));
  }
  return r.with_prec(bits);
}

}  // namespace hankelpv
