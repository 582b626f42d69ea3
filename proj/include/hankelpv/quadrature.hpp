// Tanh-sinh (double exponential) quadrature on a finite interval.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"

namespace hankelpv {

// A quadrature abscissa together with its distances to both endpoints,
// computed without cancellation so integrands may use them near the ends.
struct QuadNode {
  Real x;
  Real from_a;  // x - a
  Real from_b;  // b - x
};

// Fills `out` (pre-sized to the integrand dimension) with f(node).
using VectorIntegrand = std::function<void(const QuadNode&, std::vector<Real>& out)>;

struct QuadratureResult {
  std::vector<Real> values;
  // Largest |I_L - I_{L-1}| relative to the L1 mass of each component.
  Real error_estimate;
  int level = 0;
  long evaluations = 0;
};

// How a refinement level is accepted.  strict: two successive levels agree
// to cfg.target_digits.  extrapolated: the error of level L is estimated as
// d_L d_{L-1} (d_L = |I_L - I_{L-1}|, digits roughly double per level), which
// saves the final confirming level on smooth integrands.
enum class QuadStop { strict, extrapolated };

// Refines the step 2^-L until `stop` accepts a level for every component.
// With fixed_level >= 0 the rule at that level is applied as-is (no
// convergence test); stencil evaluations use this so the rule does not
// change between neighbouring arguments.
QuadratureResult integrate_vector(const VectorIntegrand& f, std::size_t dim, const Real& a,
                                  const Real& b, const PrecisionConfig& cfg,
                                  int fixed_level = -1, QuadStop stop = QuadStop::strict);

Real integrate(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
               const PrecisionConfig& cfg);

}  // namespace hankelpv
