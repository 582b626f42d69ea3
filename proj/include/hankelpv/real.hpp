// Arbitrary-precision real built on MPFR.
//
// Every value carries its own precision; binary operations produce a result
// at the larger of the two operand precisions.  There is no global working
// precision: constants are created with an explicit bit count.
#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstring>
#include <iosfwd>
#include <string>
#include <utility>

namespace hankelpv {

using Bits = mpfr_prec_t;

class Real {
 public:
  Real() {
    mpfr_init2(v_, 53);
    mpfr_set_zero(v_, 1);
  }
  Real(long value, Bits bits) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, value, MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    std::memcpy(static_cast<void*>(v_), o.v_, sizeof(mpfr_t));
    o.v_->_mpfr_d = nullptr;
  }
  ~Real() {
    if (v_->_mpfr_d) mpfr_clear(v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      if (!v_->_mpfr_d)
        mpfr_init2(v_, mpfr_get_prec(o.v_));
      else
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    std::swap(v_[0], o.v_[0]);
    return *this;
  }

  static Real from_double(double x, Bits bits) {
    Real r(uninit, bits);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
  }
  // Parses a decimal string ("1.25", "-3e-7", "1/3" is not accepted).
  static Real from_string(const std::string& s, Bits bits);
  static Real from_rational(long num, long den, Bits bits) {
    Real r(num, bits);
    mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
    return r;
  }
  static Real pi(Bits bits) {
    Real r(uninit, bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static Real ln2(Bits bits) {
    Real r(uninit, bits);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
  }
  static Real euler_gamma(Bits bits) {
    Real r(uninit, bits);
    mpfr_const_euler(r.v_, MPFR_RNDN);
    return r;
  }
  static Real nan(Bits bits) {
    Real r(uninit, bits);
    mpfr_set_nan(r.v_);
    return r;
  }

  Bits prec() const { return mpfr_get_prec(v_); }
  // Same value rounded (or exactly extended) to `bits`.
  Real with_prec(Bits bits) const {
    Real r(uninit, bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }
  // A new constant at this value's precision.
  Real make(long value) const { return Real(value, prec()); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_); }
  bool is_nan() const { return mpfr_nan_p(v_); }
  bool is_finite() const { return mpfr_number_p(v_); }
  bool is_integer() const { return mpfr_integer_p(v_); }
  int sign() const { return mpfr_sgn(v_); }
  // Binary exponent e with 0.5 <= |x| / 2^e < 1 (x nonzero).
  long exponent() const { return mpfr_get_exp(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

#define HANKELPV_COMPOUND(op, fn, fn_si)                        \
  Real& operator op(const Real& b) {                            \
    widen(b.prec());                                            \
    fn(v_, v_, b.v_, MPFR_RNDN);                                \
    return *this;                                               \
  }                                                             \
  Real& operator op(long b) {                                   \
    fn_si(v_, v_, b, MPFR_RNDN);                                \
    return *this;                                               \
  }
  HANKELPV_COMPOUND(+=, mpfr_add, mpfr_add_si)
  HANKELPV_COMPOUND(-=, mpfr_sub, mpfr_sub_si)
  HANKELPV_COMPOUND(*=, mpfr_mul, mpfr_mul_si)
  HANKELPV_COMPOUND(/=, mpfr_div, mpfr_div_si)
#undef HANKELPV_COMPOUND

  struct Uninit {};
  static constexpr Uninit uninit{};
  Real(Uninit, Bits bits) { mpfr_init2(v_, bits); }

 private:
  void widen(Bits bits) {
    if (bits > prec()) mpfr_prec_round(v_, bits, MPFR_RNDN);
  }

  mpfr_t v_;
};

// ---- arithmetic -----------------------------------------------------------

#define HANKELPV_BINOP(op, fn, fn_si, si_fn)                                \
  inline Real operator op(const Real& a, const Real& b) {                   \
    Real r(Real::uninit, std::max(a.prec(), b.prec()));                     \
    fn(r.raw(), a.raw(), b.raw(), MPFR_RNDN);                               \
    return r;                                                               \
  }                                                                         \
  inline Real operator op(Real&& a, const Real& b) {                        \
    if (a.prec() < b.prec()) return static_cast<const Real&>(a) op b;       \
    fn(a.raw(), a.raw(), b.raw(), MPFR_RNDN);                               \
    return std::move(a);                                                    \
  }                                                                         \
  inline Real operator op(const Real& a, Real&& b) {                        \
    if (b.prec() < a.prec()) return a op static_cast<const Real&>(b);       \
    fn(b.raw(), a.raw(), b.raw(), MPFR_RNDN);                               \
    return std::move(b);                                                    \
  }                                                                         \
  inline Real operator op(Real&& a, Real&& b) {                             \
    return std::move(a) op static_cast<const Real&>(b);                     \
  }                                                                         \
  inline Real operator op(Real a, long b) {                                 \
    fn_si(a.raw(), a.raw(), b, MPFR_RNDN);                                  \
    return a;                                                               \
  }                                                                         \
  inline Real operator op(long a, Real b) {                                 \
    si_fn(b.raw(), a, b.raw(), MPFR_RNDN);                                  \
    return b;                                                               \
  }

namespace detail {
inline int add_si_rev(mpfr_ptr r, long a, mpfr_srcptr b, mpfr_rnd_t m) {
  return mpfr_add_si(r, b, a, m);
}
inline int mul_si_rev(mpfr_ptr r, long a, mpfr_srcptr b, mpfr_rnd_t m) {
  return mpfr_mul_si(r, b, a, m);
}
}  // namespace detail

HANKELPV_BINOP(+, mpfr_add, mpfr_add_si, detail::add_si_rev)
HANKELPV_BINOP(-, mpfr_sub, mpfr_sub_si, mpfr_si_sub)
HANKELPV_BINOP(*, mpfr_mul, mpfr_mul_si, detail::mul_si_rev)
HANKELPV_BINOP(/, mpfr_div, mpfr_div_si, mpfr_si_div)
#undef HANKELPV_BINOP

// ---- comparison -----------------------------------------------------------

inline int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()); }
inline int cmp(const Real& a, long b) { return mpfr_cmp_si(a.raw(), b); }

inline bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
inline bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }
inline bool operator<=(const Real& a, const Real& b) { return cmp(a, b) <= 0; }
inline bool operator>=(const Real& a, const Real& b) { return cmp(a, b) >= 0; }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.raw(), b.raw()); }
inline bool operator!=(const Real& a, const Real& b) { return !(a == b); }
inline bool operator<(const Real& a, long b) { return cmp(a, b) < 0; }
inline bool operator>(const Real& a, long b) { return cmp(a, b) > 0; }
inline bool operator<=(const Real& a, long b) { return cmp(a, b) <= 0; }
inline bool operator>=(const Real& a, long b) { return cmp(a, b) >= 0; }
inline bool operator==(const Real& a, long b) { return cmp(a, b) == 0; }
inline bool operator!=(const Real& a, long b) { return cmp(a, b) != 0; }

// ---- elementary functions -------------------------------------------------

#define HANKELPV_UNARY(name, fn)              \
  inline Real name(Real x) {                  \
    fn(x.raw(), x.raw(), MPFR_RNDN);          \
    return x;                                 \
  }
HANKELPV_UNARY(abs, mpfr_abs)
HANKELPV_UNARY(sqrt, mpfr_sqrt)
HANKELPV_UNARY(exp, mpfr_exp)
HANKELPV_UNARY(expm1, mpfr_expm1)
HANKELPV_UNARY(log, mpfr_log)
HANKELPV_UNARY(log1p, mpfr_log1p)
HANKELPV_UNARY(log10, mpfr_log10)
HANKELPV_UNARY(sinh, mpfr_sinh)
HANKELPV_UNARY(cosh, mpfr_cosh)
HANKELPV_UNARY(tanh, mpfr_tanh)
HANKELPV_UNARY(cbrt, mpfr_cbrt)
HANKELPV_UNARY(square, mpfr_sqr)
#undef HANKELPV_UNARY

inline Real floor(Real x) {
  mpfr_floor(x.raw(), x.raw());
  return x;
}
inline Real pow(const Real& x, const Real& y) {
  Real r(Real::uninit, std::max(x.prec(), y.prec()));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}
inline Real pow(Real x, long k) {
  mpfr_pow_si(x.raw(), x.raw(), k, MPFR_RNDN);
  return x;
}
// x * 2^k, exact.
inline Real ldexp(Real x, long k) {
  mpfr_mul_2si(x.raw(), x.raw(), k, MPFR_RNDN);
  return x;
}
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }

// 10^(-digits) at the given precision.
Real pow10(long digits, Bits bits);

// Scientific decimal string with `digits` significant digits.
std::string to_decimal(const Real& x, int digits);

std::ostream& operator<<(std::ostream& os, const Real& x);

}  // namespace hankelpv
