// Explicit ODE integration by Gragg-Bulirsch-Stoer extrapolation.
//
// Each step runs the modified midpoint rule with 2, 4, ..., 2K substeps and
// extrapolates to zero step (order 2K, K = 12), so the scheme is an explicit
// Runge-Kutta-equivalent method of order 24 with an embedded order-22
// estimate driving the step size.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"

namespace hankelpv {

using OdeRhs = std::function<void(const Real& x, const std::vector<Real>& y, std::vector<Real>& dy)>;
// Returns a reason when the state must not be continued.
using OdeGuard = std::function<std::optional<std::string>(const Real& x, const std::vector<Real>& y)>;

struct OdeProblem {
  std::size_t dimension = 0;
  OdeRhs rhs;
  Real x0;
  std::vector<Real> y0;
  Real x_end;
  // Local error per unit step, measured as |err_i| / (1 + |y_i|).
  Real tolerance;
  OdeGuard guard;
  // The integrator lands exactly on each of these (sorted along the path).
  std::vector<Real> sample_points;
};

struct OdeSample {
  Real x;
  std::vector<Real> y;
};

struct OdeTrajectory {
  std::vector<OdeSample> samples;  // one per requested sample point
  OdeSample end;
  long steps = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

// Raised when the guard fires or the step underflows; carries the last
// state that was accepted and passed the guard.
class OdeHalt : public NumericError {
 public:
  OdeHalt(Failure kind, const std::string& what, OdeSample last, std::vector<OdeSample> samples)
      : NumericError(kind, what), last_(std::move(last)), samples_(std::move(samples)) {}
  const OdeSample& last() const { return last_; }
  const std::vector<OdeSample>& samples() const { return samples_; }

 private:
  OdeSample last_;
  std::vector<OdeSample> samples_;
};

OdeTrajectory solve_ode(const OdeProblem& problem, const PrecisionConfig& cfg);

}  // namespace hankelpv
