// The weight w(x,t) = (1-x^2)^alpha e^{-t/x^2} on [-1,1]: moments, Hankel
// determinants, recurrence coefficients and the monic orthogonal
// polynomials.
#pragma once

#include <vector>

#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"

namespace hankelpv {

struct WeightParams {
  Real alpha;
  Real t;
  void validate() const;
};

// w(x) for 0 <= x <= 1 given x and 1 - x (to keep (1-x)^alpha accurate).
Real weight_at(const Real& x, const Real& one_minus_x, const WeightParams& p);

enum class Provenance { closed_form, closed_form_escalated, quadrature };
const char* provenance_name(Provenance p);

struct Moment {
  Real value;
  Provenance provenance = Provenance::closed_form;
  // Bits lost to cancellation between the two Kummer terms.
  long cancelled_bits = 0;
};

struct MomentTable {
  WeightParams params;
  std::vector<Moment> mu;  // j = 0..j_max
  const Real& operator[](std::size_t j) const { return mu[j].value; }
};

// Kummer closed form for one moment (exact zero for odd j).
Moment moment_closed(int j, const WeightParams& p, const PrecisionConfig& cfg);
// 2 * int_0^1 x^j w(x) dx by tanh-sinh, for j = 0..j_max at once.
std::vector<Real> moments_quadrature(int j_max, const WeightParams& p, const PrecisionConfig& cfg);
// Closed-form table for j = 0..j_max (Gamma factors by recurrence in j).
MomentTable moments(int j_max, const WeightParams& p, const PrecisionConfig& cfg);

struct HankelDet {
  Real log_abs;
  int sign = 1;
};

// ln D_n(t) from LDL^T factorizations of the even and odd moment blocks.
HankelDet hankel_det(int n, const WeightParams& p, const PrecisionConfig& cfg);

struct RecurrenceTable {
  WeightParams params;
  int n_max = 0;
  std::vector<Real> h;      // n = 0..n_max
  std::vector<Real> beta;   // n = 0..n_max, beta[0] = 0
  std::vector<Real> p1;     // n = 0..n_max+1
  std::vector<Real> log_d;  // n = 0..n_max+1, log_d[0] = 0
};

RecurrenceTable recurrence_table(int n_max, const WeightParams& p, const PrecisionConfig& cfg);

struct PolynomialEval {
  int n = 0;
  Real x;
  Real value, d1, d2;
};

// P_0..P_n at x with exact first and second x-derivatives.
std::vector<PolynomialEval> eval_polys(int n, const Real& x, const RecurrenceTable& table);
PolynomialEval eval_poly(int n, const Real& x, const RecurrenceTable& table);

// ln D_n(0): Barnes G form when 2 alpha is an integer, else the Gamma product.
Real hankel_det_t0(int n, const Real& alpha, const PrecisionConfig& cfg);

// Guard bits added for the Hankel factorization of order n.
Bits hankel_guard_bits(int n);

}  // namespace hankelpv
