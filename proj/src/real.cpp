#include "hankelpv/real.hpp"

#include <ostream>
#include <stdexcept>

namespace hankelpv {

Real Real::from_string(const std::string& s, Bits bits) {
  Real r(uninit, bits);
  char* end = nullptr;
  if (mpfr_strtofr(r.raw(), s.c_str(), &end, 10, MPFR_RNDN), end == s.c_str() || *end != '\0')
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  return r;
}

Real pow10(long digits, Bits bits) {
  Real r(10, bits);
  mpfr_pow_si(r.raw(), r.raw(), -digits, MPFR_RNDN);
  return r;
}

std::string to_decimal(const Real& x, int digits) {
  if (x.is_nan()) return "nan";
  if (!x.is_finite()) return x.sign() < 0 ? "-inf" : "inf";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", std::max(digits - 1, 0), x.raw());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  return os << to_decimal(x, 20);
}

}  // namespace hankelpv
