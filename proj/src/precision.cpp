#include "hankelpv/precision.hpp"

#include <cmath>

namespace hankelpv {

const char* failure_name(Failure f) {
  switch (f) {
    case Failure::pole: return "pole";
    case Failure::cancellation: return "cancellation";
    case Failure::non_convergence: return "non-convergence";
    case Failure::precision_exhausted: return "precision-exhausted";
    case Failure::ode_guard: return "ode-guard";
    case Failure::step_underflow: return "step-underflow";
    case Failure::derivative_unstable: return "derivative-unstable";
  }
  return "unknown";
}

int PrecisionConfig::max_target_digits(Bits bits) {
  return static_cast<int>(std::floor(static_cast<double>(bits) * std::log10(2.0))) - 10;
}

PrecisionConfig PrecisionConfig::saturating(Bits bits) {
  PrecisionConfig c;
  c.bits = bits;
  c.target_digits = max_target_digits(bits);
  return c;
}

void PrecisionConfig::validate() const {
  if (bits < 128) throw UsageError("bits must be >= 128 (got " + std::to_string(bits) + ")");
  if (target_digits < 1) throw UsageError("target_digits must be positive");
  if (target_digits > max_target_digits(bits))
    throw UsageError("target_digits " + std::to_string(target_digits) + " exceeds " +
                     std::to_string(max_target_digits(bits)) + " supported at " +
                     std::to_string(bits) + " bits");
  if (!(residual_scale > 0.0 && residual_scale <= 1.0))
    throw UsageError("residual_scale must lie in (0, 1]");
}

Real PrecisionConfig::residual_threshold() const {
  Real e = Real::from_double(-residual_scale * target_digits, bits);
  return pow(Real(10, bits), e);
}

PrecisionConfig PrecisionConfig::with_bits(Bits b) const {
  PrecisionConfig c = *this;
  c.bits = b;
  return c;
}

}  // namespace hankelpv
