// Central differences with Richardson extrapolation.
//
// Orders 1 and 2 share a stencil x +- h/2^k (k = 0..3, h = 2^-(bits/4));
// order 3 uses a coarser base step 2^-(bits/6) because its roundoff grows
// like eps/h^3.
#pragma once

#include <functional>
#include <vector>

#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"

namespace hankelpv {

struct DerivativeResult {
  Real value;
  Real error_estimate;
};

DerivativeResult derivative(const std::function<Real(const Real&)>& f, const Real& x, int order,
                            const PrecisionConfig& cfg);

// Value and derivatives of one component of a vector-valued function.
struct Jet {
  Real value;
  Real d[4];    // d[1..max_order]
  Real err[4];  // Richardson error estimates
};

// Evaluates f once per stencil point and differentiates every component.
std::vector<Jet> differentiate(const std::function<std::vector<Real>(const Real&)>& f,
                               const Real& x, int max_order, const PrecisionConfig& cfg);

}  // namespace hankelpv
