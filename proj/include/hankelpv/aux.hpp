// Ladder-operator auxiliary quantities r_n(t), R_n(t), sigma_n(t) and the
// rational coefficients A_n(z), B_n(z), each by an algebraic identity route
// and by an independent quadrature route.
#pragma once

#include <vector>

#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"
#include "hankelpv/weight.hpp"

namespace hankelpv {

enum class Route { identity, quadrature };
const char* route_name(Route r);

struct AuxTable {
  WeightParams params;
  Route route = Route::identity;
  int n_max = 0;               // R covers 0..n_max
  std::vector<Real> r;         // 0..n_max+1
  std::vector<Real> R;         // 0..n_max
  std::vector<Real> sigma;     // 0..n_max+1
};

// r_n = [1-(-1)^n] t + (2n+1+2 alpha) beta_n - 2 p(n,t) - n.
Real aux_r(int n, const RecurrenceTable& table);
// R_n = r_{n+1} + r_n.
Real aux_R(int n, const AuxTable& aux);
// sigma_n = -sum_{j<n} R_j, summed in index order.
Real sigma(int n, const AuxTable& aux);

// Identity-route table from a recurrence table covering 0..n_max+1.
AuxTable build_aux(const RecurrenceTable& table);
// Quadrature-route table: R_n and r_n from their defining integrals, using
// polynomials from `table` (which must cover n_max + 1).
AuxTable build_aux_oracle(const RecurrenceTable& table, const PrecisionConfig& cfg);

Real aux_R_oracle(int n, const WeightParams& p, const PrecisionConfig& cfg);
Real aux_r_oracle(int n, const WeightParams& p, const PrecisionConfig& cfg);

// Closed forms of r_1 = R_0 and R_1.
Real r1_closed(const WeightParams& p);
Real R1_closed(const WeightParams& p);

Real beta_via_aux(int n, const Real& R_n, const Real& r_n, const WeightParams& p);
Real beta_via_sigma(int n, const Real& r_n, const Real& sigma_n, const WeightParams& p);

// v'(z) = -2t/z^3 + 2 alpha z/(1-z^2) and its z-derivative.
Real v_prime(const Real& z, const WeightParams& p);
Real v_double_prime(const Real& z, const WeightParams& p);

struct LadderValues {
  Real A, B;    // A_n(z), B_n(z)
  Real dA, dB;  // z-derivatives
};

LadderValues eval_ladder(int n, const Real& z, const Real& R_n, const Real& r_n,
                         const WeightParams& p);

// A_n(z) and B_n(z) from their integral definitions.
Real ladder_A_oracle(int n, const Real& z, const RecurrenceTable& table, const PrecisionConfig& cfg);
Real ladder_B_oracle(int n, const Real& z, const RecurrenceTable& table, const PrecisionConfig& cfg);

}  // namespace hankelpv
