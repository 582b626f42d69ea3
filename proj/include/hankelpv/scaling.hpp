// Double-scaling limits: the Painleve III' function g(s,a) with its small-
// and large-s expansions, finite-n scans along 2n^2 t = s and n^4 t = s,
// the sigma form of Painleve III', the Dyson-constant experiment, and the
// Painleve V evolution of R_n(t) at fixed n.
#pragma once

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"

namespace hankelpv {

// Exact rational from "3", "-0.25", "2.5e-3" or "1/2".
mpq_class parse_rational(const std::string& s);
Real to_real(const mpq_class& q, Bits bits);

// ---- series ---------------------------------------------------------------

enum class SeriesKind {
  g1_small,
  g2_small,
  g1_large,
  g2_large,
  g_small,         // g(s,a)
  g_large,
  delta_small,     // ln Delta_1 = ln Delta_2
  delta_large,
  delta_ab_small,  // ln Delta(s,a)
  delta_ab_large,
};
const char* series_kind_name(SeriesKind k);
SeriesKind parse_series_kind(const std::string& name);
bool is_large(SeriesKind k);
bool is_parametric(SeriesKind k);

struct SeriesTerm {
  mpq_class exponent;
  mpq_class coefficient;
};

// sum c_k s^{e_k} + log_coefficient ln s + constant.  Terms are ordered from
// dominant to subdominant in the regime of validity.
struct SeriesExpansion {
  SeriesKind kind = SeriesKind::g_small;
  mpq_class a;  // parametric kinds
  std::vector<SeriesTerm> terms;
  mpq_class log_coefficient;
  Real constant;  // transcendental constant term (0 when absent)
  std::string constant_name;
  SeriesTerm first_omitted;  // next nonzero term, from the recursion
  bool has_first_omitted = false;

  // |first omitted term| at s.
  Real truncation_estimator(const Real& s) const;
};

// Reference coefficients of the double-scaling expansions (fixed tables).
SeriesExpansion printed_series(SeriesKind kind, const mpq_class& a, Bits bits);
// Coefficients from the exact recursions of the III' equation for g(s,a)
// (`order` recursion steps).  The ln s coefficient and constant of the
// large-s ln Delta kinds are integration constants and are taken as printed.
SeriesExpansion derived_series(SeriesKind kind, const mpq_class& a, int order, Bits bits);

struct SeriesValue {
  Real value;
  Real truncation_estimate;
  bool in_regime = true;  // |first omitted| < |last kept|
  std::string diagnostic;
};
SeriesValue series_eval(const SeriesExpansion& e, const Real& s);
SeriesValue series_eval(SeriesKind kind, const Real& s, Bits bits, const mpq_class& a = 0);

// c(a) = ln[G(a+1) / (2 pi)^{a/2}] for integer or half-integer a.
Real barnes_constant(const mpq_class& a, Bits bits);
// ln 2 / 12 + 3 zeta'(-1).
Real dyson_constant(Bits bits);

// ---- Painleve III' for g(s,a) ---------------------------------------------

// g'' = g'^2/g - g'/s + 2g^2/s^2 + a/(2s) - 1/(4g), integrated in tau = ln s
// with state (g, s g', J, L): J = int_0^s g(x)/x dx and L = ln Delta(s,a),
// which satisfy s J' = g and s L' = -J.
struct PiiiOptions {
  enum class Seed { small_s, large_s };
  Seed seed = Seed::small_s;
  int seed_order = 40;  // recursion terms used for the seed
  Real s0;              // seed point; zero picks one from the truncation estimate
  std::vector<Real> sample_points;
};

struct PiiiPoint {
  Real s, g, dg, J, logDelta;
};

struct PiiiTrajectory {
  mpq_class a;
  Real s0;
  Real seed_truncation;  // series truncation estimate at s0 (g component)
  std::vector<PiiiPoint> samples;
  PiiiPoint end;
  bool halted = false;
  std::string halt_reason;
  long steps = 0;
};

PiiiTrajectory solve_piii_prime(const mpq_class& a, const Real& s_end, const PrecisionConfig& cfg,
                                const PiiiOptions& opt = {});

// ---- Painleve V evolution of R_n(t) -----------------------------------------

struct PvPoint {
  Real t, R, dR, d2R;
  Real pv_residual;  // S_n = 1 + R_n/(2n+2alpha+1) in the Painleve V equation
};

struct PvTrajectory {
  int n = 0;
  Real alpha, t0, t_end;
  std::vector<PvPoint> samples;  // includes t0 and t_end
  Real direct_R_end;             // R_n(t_end) from the finite-n tables
  Real endpoint_error;           // |R_ode - R_direct| / |R_direct|
  Real max_pv_residual;
  bool halted = false;
  std::string halt_reason;
  long steps = 0;
};

// Integrates the second-order equation for R_n from ladder-aux data at t0.
PvTrajectory continue_pv(int n, const Real& alpha, const Real& t0, const Real& t_end,
                         const PrecisionConfig& cfg, int samples = 10);

// ---- double-scaling scans ---------------------------------------------------

enum class ScanMode { g1, g2, delta1, delta2, sigma_n4 };
const char* scan_mode_name(ScanMode m);
ScanMode parse_scan_mode(const std::string& name);

struct ScanResult {
  ScanMode mode = ScanMode::g1;
  Real s, alpha;
  std::vector<int> n_list;  // points that were computed
  std::vector<Real> raw;
  Real extrapolated;        // polynomial in 1/n through every point
  Real extrapolated_even;   // polynomial in 1/n^2
  Real error_bar;           // spread of the two models and of the last two orders
  Real reference;           // NaN when there is none
  std::string reference_name;
  Real agreement_digits;    // -log10 of the relative deviation from the reference
  bool monotone = true;     // |raw - reference| non-increasing along n_list
  std::vector<std::string> notes;
};

// Raw sequences: g1: n R_{2n}(s/2n^2); g2: n R_{2n+1}(s/2n^2);
// delta1/2: ln[D_m(s/2n^2)/D_m(0)] with m = 2n, 2n+1; sigma-n4: sigma_n(s/n^4).
ScanResult double_scaling_scan(const Real& s, const std::vector<int>& n_list, const Real& alpha,
                               ScanMode mode, const PrecisionConfig& cfg);

// Richardson extrapolation to n = infinity in powers of 1/n (even = 1/n^2).
Real extrapolate(const std::vector<int>& n, const std::vector<Real>& v, bool even);

// ---- sigma form of Painleve III' --------------------------------------------

struct SigmaSample {
  Real s, sigma, d1, d2;
  Real err0, err1, err2;  // error bars of sigma, sigma', sigma''
};

struct SigmaFormRow {
  Real s;
  Real residual;   // 4s^2 sigma''^2 + 4s sigma' sigma'' + 8s sigma'^3 - 4 sigma sigma'^2 + sigma'^2
  Real error_bar;  // largest change of the residual over the error box
  bool below_error_bar = false;
  bool trivially_true = false;  // sigma' = sigma'' = 0
  Real sigma, d1, d2;
};

std::vector<SigmaFormRow> sigma_form_residual(const std::function<SigmaSample(const Real&)>& sigma,
                                              const std::vector<Real>& s_points);

// sigma(s) = lim sigma_n(s/n^4) with its first two s-derivatives, each
// extrapolated in 1/n from t-derivative stencils at every n.
SigmaSample sigma_n4_extrapolated(const Real& s, const std::vector<int>& n_list, const Real& alpha,
                                  const PrecisionConfig& cfg);

// ---- Dyson constant ---------------------------------------------------------

struct DysonEstimate {
  Real s;
  Real log_delta;  // ln Delta_1(s)
  Real constant;   // log_delta minus the non-constant large-s terms
};

struct DysonResult {
  Real reference;          // ln 2/12 + 3 zeta'(-1)
  Real barnes_sum;         // c(1/2) + c(-1/2) from Barnes G values
  Real identity_residual;  // |barnes_sum - reference|
  Real s_lo, s_hi;
  // III' route: both a = +-1/2 trajectories from the small-s anchor at s_lo.
  std::vector<DysonEstimate> ode;
  Real ode_constant, ode_spread;
  bool ode_ok = false;
  // Finite-n route: extrapolated ln[D_2n(s/2n^2)/D_2n(0)] at the same s.
  std::vector<DysonEstimate> finite_n;
  Real finite_n_constant, finite_n_error_bar;
  bool finite_n_ok = false;
  std::vector<std::string> diagnostics;
};

DysonResult dyson_constant_experiment(const Real& alpha, const Real& s_lo, const Real& s_hi,
                                      const std::vector<int>& n_list, const PrecisionConfig& cfg);

}  // namespace hankelpv
