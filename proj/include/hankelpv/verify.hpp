// Numerical verification of the ladder-operator identities, the difference
// and differential equations for r_n, R_n, sigma_n, the integral
// representation of ln D_n and the ladder relations themselves.
//
// Every identity is evaluated as LHS - RHS in tracked arithmetic: alongside
// each value we carry a bound on the magnitude of the terms that produced it,
// and the residual is |LHS - RHS| / that bound.
#pragma once

#include <string>
#include <vector>

#include "hankelpv/aux.hpp"
#include "hankelpv/differentiate.hpp"
#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"
#include "hankelpv/weight.hpp"

namespace hankelpv {

// Identity ids, in report order.
const std::vector<std::string>& identity_ids();

// Which inputs an identity consumes and by which route.  Every entry names at
// least one input that is not produced by the identity's own derivation.
struct IdentityInputs {
  std::string identity;
  std::string group;   // scalar, difference, differential, integral, ladder
  std::string inputs;  // human-readable route list
};
const std::vector<IdentityInputs>& identity_dependency_graph();

struct VerificationRow {
  std::string identity;
  int n = 0;
  Real alpha, t;
  Bits bits = 0;
  Real lhs_scale;  // magnitude bound of the terms
  Real residual;   // |lhs - rhs| / lhs_scale
  bool pass = false;
  bool trivially_true = false;
  std::string branch;  // square-root branch realized, when the identity has one
  std::string note;
};

struct VerificationReport {
  std::vector<VerificationRow> rows;

  // Sorts by identity id (report order), then n, alpha, t.
  void sort();
  bool all_pass() const;
  // Ids with no row at all.
  std::vector<std::string> missing_ids() const;
  std::string to_json() const;
  std::string to_csv() const;
};

// Everything the identity checks consume at one (alpha, t).
struct VerifyInputs {
  WeightParams params;
  PrecisionConfig cfg;
  int n_max = 0;
  RecurrenceTable table;  // n = 0..n_max+2
  AuxTable ident;         // identity route
  AuxTable oracle;        // quadrature route, R up to n_max+1
  std::vector<Real> sigma_def;  // 2t d/dt ln D_n, n = 0..n_max+1
  // t-jets of the identity-route quantities for n = 0..n_max.
  std::vector<Jet> jR, jr, jbeta, jp, jsigma, jlogh, jlogD;
};

VerifyInputs prepare_inputs(int n_max, const WeightParams& p, const PrecisionConfig& cfg);

std::vector<VerificationRow> verify_scalar_identities(const VerifyInputs& in);
std::vector<VerificationRow> verify_difference_equations(const VerifyInputs& in);
std::vector<VerificationRow> verify_differential(const VerifyInputs& in);
// Ladder relations at the given z points, folded into one row per n.
std::vector<VerificationRow> verify_ladder(const VerifyInputs& in, const std::vector<Real>& z);
std::vector<VerificationRow> verify_linear_ode_Pn(const VerifyInputs& in, const std::vector<Real>& z);

// ln D_n(t_end)/D_n(0) against the quadrature of the R_n integrand for
// n = 0..n_max (one vector quadrature).
std::vector<VerificationRow> verify_integral_representation(int n_max, const WeightParams& p,
                                                            const PrecisionConfig& cfg);
VerificationRow verify_integral_representation_at(int n, const WeightParams& p,
                                                  const PrecisionConfig& cfg);

// Standard ladder evaluation points.
std::vector<Real> default_ladder_points(Bits bits);

// All identities at one grid point.
std::vector<VerificationRow> verify_grid_point(int n_max, const WeightParams& p,
                                               const PrecisionConfig& cfg);

struct GridSpec {
  int n_max = 16;
  std::vector<std::string> alphas{"0.7", "1", "2.3"};
  std::vector<std::string> ts{"0.05", "0.5", "2"};
};

VerificationReport run_identity_suite(const GridSpec& grid, const PrecisionConfig& cfg);

}  // namespace hankelpv
