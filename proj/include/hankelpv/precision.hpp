// Working-precision policy and the error types shared by every module.
#pragma once

#include <stdexcept>
#include <string>

#include "hankelpv/real.hpp"

namespace hankelpv {

// Bad input or unsupported parameter combination (CLI exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Failure {
  pole,
  cancellation,
  non_convergence,
  precision_exhausted,
  ode_guard,
  step_underflow,
  derivative_unstable,
};

const char* failure_name(Failure f);

// A numeric diagnostic (CLI exit code 2).
class NumericError : public std::runtime_error {
 public:
  NumericError(Failure kind, const std::string& what)
      : std::runtime_error(std::string(failure_name(kind)) + ": " + what), kind_(kind) {}
  Failure kind() const { return kind_; }

 private:
  Failure kind_;
};

struct PrecisionConfig {
  Bits bits = 512;
  int target_digits = 60;
  double residual_scale = 0.5;

  // Largest target_digits the working precision supports (10 guard digits).
  static int max_target_digits(Bits bits);
  // Config whose target tracks the working precision (used when residuals
  // must shrink with bits rather than saturate at a fixed target).
  static PrecisionConfig saturating(Bits bits);

  void validate() const;
  Real tolerance() const { return pow10(target_digits, bits); }
  Real residual_threshold() const;
  PrecisionConfig with_bits(Bits b) const;
  PrecisionConfig escalated() const { return with_bits(2 * bits); }
};

}  // namespace hankelpv
