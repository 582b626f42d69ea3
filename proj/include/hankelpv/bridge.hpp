// The Pollaczek-Jacobi weight x^a (1-x)^b e^{-t/x} on [0,1] and the
// substitution x = y^2 that splits the main weight by parity: a = -1/2
// carries the even-degree polynomials, a = +1/2 the odd ones.
#pragma once

#include <vector>

#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"
#include "hankelpv/verify.hpp"

namespace hankelpv {

struct TildeParams {
  Real a, b, t;
  void validate() const;
};

struct TildeTable {
  TildeParams params;
  int n_max = 0;
  std::vector<Real> mu;          // tilde moments 0..2 n_max + 2
  std::vector<Real> tilde_h;     // 0..n_max
  std::vector<Real> tilde_logD;  // 0..n_max+1, tilde_logD[0] = 0
  // x P_j = P_{j+1} + rec_a[j] P_j + rec_b[j] P_{j-1}, j = 0..n_max.
  std::vector<Real> rec_a, rec_b;
  // H_n = t d/dt ln D_n and its t-derivatives, n = 0..n_max+1.
  std::vector<Real> H, dH, d2H;
  std::vector<Real> Rstar, Rtilde;  // 0..n_max
  int quad_level = 0;
};

// int_0^1 x^{j+a} (1-x)^b e^{-t/x} dx for j = 0..j_max.  A fixed_level >= 0
// pins the quadrature rule (for differentiation stencils).
std::vector<Real> tilde_moments(int j_max, const TildeParams& tp, const PrecisionConfig& cfg,
                                int fixed_level = -1, int* level_used = nullptr);

// Moments, norms, recurrence, H_n (by differentiating ln D_n in t) and the
// R*_n, R~_n integrals.  with_derivatives=false skips H.
TildeTable tilde_moments_and_table(int n_max, const TildeParams& tp, const PrecisionConfig& cfg,
                                   bool with_derivatives = true);

// Monic tilde polynomials P_0..P_n at x.
std::vector<Real> eval_tilde_polys(int n, const Real& x, const TildeTable& table);

// (hd1) (hd2) (rela1) (rela2) (re3) (re4) (rs1) (rs2) (dou1) (dou2) (de1) (de2)
// for n = 0..n_max at one (alpha, t).
std::vector<VerificationRow> verify_parity_splitting(int n_max, const WeightParams& p,
                                                     const PrecisionConfig& cfg);

// The H_n equation and its shifted sigma form for the given n and table.
std::vector<VerificationRow> verify_jmo_sigma_form(const std::vector<int>& n_list,
                                                   const TildeTable& table,
                                                   const PrecisionConfig& cfg);

const std::vector<std::string>& bridge_ids();

}  // namespace hankelpv
