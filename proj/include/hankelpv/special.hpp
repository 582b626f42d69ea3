// Special functions at arbitrary precision.
#pragma once

#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"

namespace hankelpv {

// Gamma(x); throws NumericError(pole) at non-positive integers.
Real gamma(const Real& x);
// ln|Gamma(x)|.
Real log_gamma(const Real& x);

// Confluent hypergeometric 1F1(a; b; z) by its power series.  The series is
// summed with enough guard bits to absorb the cancellation between terms
// (escalating up to 8x the operand precision).
Real kummer_phi(const Real& a, const Real& b, const Real& z);

// ln G(x) for the Barnes G-function at positive integers and half-integers.
Real log_barnes_g(const Real& x);

// ln A (Glaisher-Kinkelin) from the Euler-Maclaurin expansion of sum k ln k.
Real log_glaisher(Bits bits);
// zeta'(-1) = 1/12 - ln A.
Real zeta_prime_minus_one(Bits bits);

// Bernoulli number B_{2j} from zeta(2j).
Real bernoulli_even(long j, Bits bits);

}  // namespace hankelpv
