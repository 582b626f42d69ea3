#include "hankelpv/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "hankelpv/aux.hpp"
#include "hankelpv/differentiate.hpp"
#include "hankelpv/ode.hpp"
#include "hankelpv/weight.hpp"
#include "tracked.hpp"

namespace hankelpv {

using namespace detail;

namespace {

Real nan_like(Bits bits) { return Real::nan(bits); }

// Sum of c_k s^k over the small-s series of g together with its tau-derivative
// s g' and the two integrals J = sum c_k s^k / k, L = -sum c_k s^k / k^2.
struct SmallSeed {
  Real g, q, J, L, truncation;
};

SmallSeed small_seed(const mpq_class& a, const Real& s, int order, Bits bits) {
  auto e = derived_series(SeriesKind::g_small, a, order, bits);
  SmallSeed out{Real(0, bits), Real(0, bits), Real(0, bits), Real(0, bits), Real(0, bits)};
  for (const auto& t : e.terms) {
    const long k = t.exponent.get_num().get_si();
    Real term = to_real(t.coefficient, bits) * pow(s, k);
    out.g += term;
    out.q += term * k;
    out.J += term / k;
    out.L -= term / (k * k);
  }
  out.truncation = e.truncation_estimator(s);
  return out;
}

// Large-s seed by optimal truncation of the asymptotic series.
SmallSeed large_seed(const mpq_class& a, const Real& s, int order, Bits bits) {
  auto g = derived_series(SeriesKind::g_large, a, order, bits);
  auto d = derived_series(SeriesKind::delta_ab_large, a, order, bits);
  SmallSeed out{Real(0, bits), Real(0, bits), Real(0, bits), Real(0, bits), Real(0, bits)};
  Real prev = Real::nan(bits);
  for (const auto& t : g.terms) {
    const Real p = to_real(t.exponent, bits);
    Real term = to_real(t.coefficient, bits) * pow(s, p);
    if (!prev.is_nan() && abs(term) > prev) break;
    prev = abs(term);
    out.g += term;
    out.q += term * p;
    out.truncation = abs(term);
  }
  // L = C + lambda ln s + sum e_p s^p and J = -s L'.
  const Real lambda = to_real(d.log_coefficient, bits);
  out.L = d.constant + lambda * log(s);
  out.J = -lambda;
  prev = Real::nan(bits);
  for (const auto& t : d.terms) {
    const Real p = to_real(t.exponent, bits);
    Real term = to_real(t.coefficient, bits) * pow(s, p);
    if (!prev.is_nan() && abs(term) > prev) break;
    prev = abs(term);
    out.L += term;
    out.J -= term * p;
  }
  return out;
}

PiiiPoint to_point(const OdeSample& smp) {
  Real s = exp(smp.x);
  return {s, smp.y[0], smp.y[1] / s, smp.y[2], smp.y[3]};
}

// The (ode) relation solved for R'' and the (pv) residual of S = 1 + R/N1.
struct PvSystem {
  int n;
  Real alpha;
  Bits bits;

  Real N1() const { return 2 * alpha + (2 * n + 1); }
  long sg() const { return n % 2 == 0 ? 1 : -1; }

  Real second_derivative(const Real& t, const Real& R, const Real& R1) const {
    const Real N = N1(), t2 = square(t);
    const long s = sg();
    Real c3 = 4 * Real(n, bits) * n + 4 * (2 * alpha + 1) * n + 4 * alpha + 1 - 4 * t2 - 4 * s * t;
    Real rest = -4 * t2 * (4 * alpha + (4 * n + 2) + 3 * R) * square(R1) +
                8 * t * (N + R) * R * R1 - pow(R, 5) - 2 * N * pow(R, 4) - c3 * pow(R, 3) +
                8 * t * N * (2 * t + s) * square(R) + 4 * t * square(N) * (5 * t + s) * R +
                8 * t2 * pow(N, 3);
    return -rest / (8 * t2 * R * (N + R));
  }

  Real pv_residual(const Real& tv, const Real& R, const Real& R1, const Real& R2) const {
    const Tracked a = K(alpha), t = K(tv), N = K(N1());
    const Tracked S = 1 + K(R) / N, S1 = K(R1) / N, S2 = K(R2) / N;
    Tracked rhs = (3 * S - 1) * sq(S1) / (2 * S * (S - 1)) - S1 / t +
                  sq(S - 1) / sq(t) * (sq(N) * S * K(Real::from_rational(1, 8, bits)) - sq(a) / (2 * S)) -
                  sg() * S / (2 * t) - S * (S + 1) / (2 * (S - 1));
    Tracked d = S2 - rhs;
    if (d.m.is_zero()) return Real(0, bits);
    return abs(d.v) / d.m;
  }
};

Real direct_R(int n, const Real& alpha, const Real& t, const PrecisionConfig& cfg) {
  return build_aux(recurrence_table(n + 1, {alpha, t}, cfg)).R[n];
}

// Non-constant part of the printed large-s expansion of ln Delta_1.
Real delta_large_nonconstant(const Real& s, Bits bits) {
  auto e = printed_series(SeriesKind::delta_large, 0, bits);
  return series_eval(e, s).value - e.constant;
}

Real digits_between(const Real& x, const Real& ref) {
  const Bits bits = x.prec();
  if (ref.is_nan() || x.is_nan()) return Real::nan(bits);
  Real d = abs(x - ref);
  if (d.is_zero()) return Real(static_cast<long>(PrecisionConfig::max_target_digits(bits)), bits);
  if (!ref.is_zero()) d = d / abs(ref);
  return -log10(d);
}

}  // namespace

// ---- Painleve III' ----------------------------------------------------------

PiiiTrajectory solve_piii_prime(const mpq_class& a, const Real& s_end_in, const PrecisionConfig& cfg,
                                const PiiiOptions& opt) {
  cfg.validate();
  const Bits bits = cfg.bits;
  const Real tol = cfg.tolerance();
  const Real s_end = s_end_in.with_prec(bits);
  if (!(s_end > 0)) throw UsageError("s_end must be positive");
  const bool small = opt.seed == PiiiOptions::Seed::small_s;
  if (small && a.get_den() == 1) throw UsageError("the small-s seed needs a not an integer");

  PiiiTrajectory tr;
  tr.a = a;
  Real s0 = opt.s0 > 0 ? opt.s0.with_prec(bits) : Real(0, bits);
  if (s0.is_zero()) {
    if (small) {
      // Largest 10^-k whose truncation error is below tolerance relative to g.
      for (int k = 1; k <= 40; ++k) {
        s0 = pow10(k, bits);
        auto sd = small_seed(a, s0, opt.seed_order, bits);
        if (sd.truncation <= tol * abs(sd.g)) break;
      }
    } else {
      s0 = max(s_end, Real(1, bits)) * 1000;
    }
  }
  if (small ? !(s0 < s_end) : !(s0 > s_end))
    throw UsageError("the seed point must lie before s_end along the integration");
  SmallSeed seed = small ? small_seed(a, s0, opt.seed_order, bits) : large_seed(a, s0, opt.seed_order, bits);
  tr.s0 = s0;
  tr.seed_truncation = seed.truncation;

  const Real ar = to_real(a, bits);
  OdeProblem p;
  p.dimension = 4;
  p.x0 = log(s0);
  p.x_end = log(s_end);
  p.y0 = {seed.g, seed.q, seed.J, seed.L};
  p.tolerance = tol;
  p.rhs = [ar](const Real& tau, const std::vector<Real>& y, std::vector<Real>& dy) {
    Real s = exp(tau);
    const Real& g = y[0];
    const Real& q = y[1];
    dy[0] = q;
    dy[1] = square(q) / g + 2 * square(g) + ar * s / 2 - square(s) / (4 * g);
    dy[2] = g;
    dy[3] = -y[2];
  };
  const Real floor_g = sqrt(tol), ceil_g = 1 / sqrt(floor_g);
  p.guard = [floor_g, ceil_g](const Real&, const std::vector<Real>& y) -> std::optional<std::string> {
    for (const auto& v : y)
      if (!v.is_finite()) return "non-finite state";
    if (abs(y[0]) > ceil_g) return "g blew up (movable pole)";
    if (abs(y[0]) < floor_g * (1 + abs(y[1]))) return "g reached 0 (pole of 1/(4g))";
    return std::nullopt;
  };
  std::vector<Real> pts = opt.sample_points;
  std::sort(pts.begin(), pts.end(), [&](const Real& x, const Real& y) { return small ? x < y : y < x; });
  for (const auto& sp : pts) p.sample_points.push_back(log(sp.with_prec(bits)));

  try {
    auto traj = solve_ode(p, cfg);
    for (const auto& smp : traj.samples) tr.samples.push_back(to_point(smp));
    tr.end = to_point(traj.end);
    tr.steps = traj.steps;
  } catch (const OdeHalt& h) {
    for (const auto& smp : h.samples()) tr.samples.push_back(to_point(smp));
    tr.end = to_point(h.last());
    tr.halted = true;
    tr.halt_reason = h.what();
  }
  return tr;
}

// ---- Painleve V evolution ------------------------------------------------

PvTrajectory continue_pv(int n, const Real& alpha_in, const Real& t0_in, const Real& t_end_in,
                         const PrecisionConfig& cfg, int samples) {
  cfg.validate();
  if (n < 0) throw UsageError("n must be >= 0");
  if (samples < 1) throw UsageError("need at least one sample interval");
  const Bits bits = cfg.bits;
  const Real alpha = alpha_in.with_prec(bits), t0 = t0_in.with_prec(bits),
             t_end = t_end_in.with_prec(bits);
  WeightParams{alpha, t0}.validate();
  if (!(t0 > 0) || !(t_end > 0)) throw UsageError("continue_pv needs t0, t_end > 0");
  PvSystem sys{n, alpha, bits};

  PvTrajectory tr;
  tr.n = n;
  tr.alpha = alpha;
  tr.t0 = t0;
  tr.t_end = t_end;
  auto Rfun = [&](const Real& t) { return std::vector<Real>{direct_R(n, alpha, t, cfg)}; };
  auto jet = differentiate(Rfun, t0, 1, cfg)[0];
  const Real R0 = jet.value, R0p = jet.d[1];

  auto point = [&](const Real& t, const Real& R, const Real& R1) {
    PvPoint pt{t, R, R1, sys.second_derivative(t, R, R1), Real(0, bits)};
    pt.pv_residual = sys.pv_residual(t, R, R1, pt.d2R);
    return pt;
  };

  if (t_end == t0) {
    tr.samples.push_back(point(t0, R0, R0p));
  } else {
    OdeProblem p;
    p.dimension = 2;
    p.x0 = t0;
    p.x_end = t_end;
    p.y0 = {R0, R0p};
    p.tolerance = cfg.tolerance();
    p.rhs = [&sys](const Real& t, const std::vector<Real>& y, std::vector<Real>& dy) {
      dy[0] = y[1];
      dy[1] = sys.second_derivative(t, y[0], y[1]);
    };
    const Real eps = sqrt(cfg.tolerance());
    const Real N = sys.N1();
    p.guard = [eps, N](const Real&, const std::vector<Real>& y) -> std::optional<std::string> {
      if (!y[0].is_finite() || !y[1].is_finite()) return "non-finite state";
      if (abs(y[0]) < eps) return "R_n reached 0";
      if (abs(N + y[0]) < eps) return "2n+2alpha+1+R_n reached 0";
      return std::nullopt;
    };
    for (int k = 0; k <= samples; ++k) p.sample_points.push_back(t0 + (t_end - t0) * k / samples);
    p.sample_points.back() = t_end;
    std::vector<OdeSample> smp;
    try {
      auto traj = solve_ode(p, cfg);
      smp = traj.samples;
      tr.steps = traj.steps;
    } catch (const OdeHalt& h) {
      smp = h.samples();
      smp.push_back(h.last());
      tr.halted = true;
      tr.halt_reason = h.what();
    }
    for (const auto& s : smp) tr.samples.push_back(point(s.x, s.y[0], s.y[1]));
  }
  tr.max_pv_residual = Real(0, bits);
  for (const auto& s : tr.samples) tr.max_pv_residual = max(tr.max_pv_residual, s.pv_residual);
  tr.direct_R_end = direct_R(n, alpha, t_end, cfg);
  if (tr.halted) {
    tr.endpoint_error = nan_like(bits);
  } else {
    tr.endpoint_error = abs(tr.samples.back().R - tr.direct_R_end) / abs(tr.direct_R_end);
  }
  return tr;
}

// ---- scans -------------------------------------------------------------------

const char* scan_mode_name(ScanMode m) {
  switch (m) {
    case ScanMode::g1: return "g1";
    case ScanMode::g2: return "g2";
    case ScanMode::delta1: return "delta1";
    case ScanMode::delta2: return "delta2";
    case ScanMode::sigma_n4: return "sigma-n4";
  }
  return "?";
}

ScanMode parse_scan_mode(const std::string& name) {
  for (ScanMode m : {ScanMode::g1, ScanMode::g2, ScanMode::delta1, ScanMode::delta2, ScanMode::sigma_n4})
    if (name == scan_mode_name(m)) return m;
  throw UsageError("unknown scan mode '" + name + "'");
}

Real extrapolate(const std::vector<int>& n, const std::vector<Real>& v, bool even) {
  if (n.empty() || n.size() != v.size()) throw UsageError("extrapolation needs matching, non-empty lists");
  const Bits bits = v[0].prec();
  std::vector<Real> h, p = v;
  for (int k : n) {
    Real x = Real(1, bits) / k;
    h.push_back(even ? square(x) : x);
  }
  // Neville's scheme evaluated at h = 0.
  const std::size_t m = p.size();
  for (std::size_t lvl = 1; lvl < m; ++lvl)
    for (std::size_t i = m - 1; i >= lvl; --i) {
      p[i] = (h[i - lvl] * p[i] - h[i] * p[i - 1]) / (h[i - lvl] - h[i]);
      if (i == lvl) break;
    }
  return p[m - 1];
}

namespace {

Real scan_raw(ScanMode mode, int n, const Real& s, const Real& alpha, const PrecisionConfig& cfg) {
  const Bits bits = cfg.bits;
  switch (mode) {
    case ScanMode::g1:
    case ScanMode::g2: {
      const int m = mode == ScanMode::g1 ? 2 * n : 2 * n + 1;
      Real t = s / (2 * Real(n, bits) * n);
      return n * direct_R(m, alpha, t, cfg);
    }
    case ScanMode::delta1:
    case ScanMode::delta2: {
      const int m = mode == ScanMode::delta1 ? 2 * n : 2 * n + 1;
      Real t = s / (2 * Real(n, bits) * n);
      auto tab = recurrence_table(m, {alpha, t}, cfg);
      return tab.log_d[m] - hankel_det_t0(m, alpha, cfg);
    }
    case ScanMode::sigma_n4: {
      Real t = s / pow(Real(n, bits), 4);
      return build_aux(recurrence_table(n + 1, {alpha, t}, cfg)).sigma[n];
    }
  }
  return Real::nan(bits);
}

struct Reference {
  Real value;
  std::string name;
};

Reference scan_reference(ScanMode mode, const Real& s, Bits bits) {
  SeriesKind small_k, large_k;
  switch (mode) {
    case ScanMode::g1: small_k = SeriesKind::g1_small; large_k = SeriesKind::g1_large; break;
    case ScanMode::g2: small_k = SeriesKind::g2_small; large_k = SeriesKind::g2_large; break;
    case ScanMode::delta1:
    case ScanMode::delta2: small_k = SeriesKind::delta_small; large_k = SeriesKind::delta_large; break;
    default: return {Real::nan(bits), "none"};
  }
  auto sv = series_eval(small_k, s, bits);
  auto lv = series_eval(large_k, s, bits);
  // The expansion whose first omitted term is smaller relative to its value.
  Real rs = sv.truncation_estimate / max(abs(sv.value), pow10(60, bits));
  Real rl = lv.truncation_estimate / max(abs(lv.value), pow10(60, bits));
  if (sv.in_regime && (!lv.in_regime || rs <= rl)) return {sv.value, series_kind_name(small_k)};
  if (lv.in_regime) return {lv.value, series_kind_name(large_k)};
  return {rs <= rl ? sv.value : lv.value,
          std::string(series_kind_name(rs <= rl ? small_k : large_k)) + " (outside regime)"};
}

}  // namespace

ScanResult double_scaling_scan(const Real& s_in, const std::vector<int>& n_list, const Real& alpha_in,
                               ScanMode mode, const PrecisionConfig& cfg) {
  cfg.validate();
  const Bits bits = cfg.bits;
  if (n_list.empty()) throw UsageError("empty n list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw UsageError("n list entries must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw UsageError("n list must be ascending");
  }
  const Real s = s_in.with_prec(bits), alpha = alpha_in.with_prec(bits);
  if (s < 0) throw UsageError("s must be >= 0");
  WeightParams{alpha, Real(0, bits)}.validate();

  ScanResult r;
  r.mode = mode;
  r.s = s;
  r.alpha = alpha;
  for (int n : n_list) {
    try {
      r.raw.push_back(scan_raw(mode, n, s, alpha, cfg));
      r.n_list.push_back(n);
    } catch (const NumericError& e) {
      r.notes.push_back("n=" + std::to_string(n) + ": " + e.what());
    }
  }
  auto ref = scan_reference(mode, s, bits);
  r.reference = ref.value;
  r.reference_name = ref.name;
  if (r.raw.empty()) {
    r.extrapolated = r.extrapolated_even = r.error_bar = r.agreement_digits = nan_like(bits);
    return r;
  }
  r.extrapolated = extrapolate(r.n_list, r.raw, false);
  r.extrapolated_even = extrapolate(r.n_list, r.raw, true);
  r.error_bar = abs(r.extrapolated - r.extrapolated_even);
  if (r.raw.size() > 1) {
    std::vector<int> n1(r.n_list.begin() + 1, r.n_list.end());
    std::vector<Real> v1(r.raw.begin() + 1, r.raw.end());
    r.error_bar = max(r.error_bar, abs(r.extrapolated - extrapolate(n1, v1, false)));
  }
  r.agreement_digits = digits_between(r.extrapolated, r.reference);
  const Real& target = r.reference.is_nan() ? r.extrapolated : r.reference;
  for (std::size_t i = 1; i < r.raw.size(); ++i)
    if (abs(r.raw[i] - target) > abs(r.raw[i - 1] - target)) {
      r.monotone = false;
      r.notes.push_back("non-monotone approach at n=" + std::to_string(r.n_list[i]));
    }
  return r;
}

// ---- sigma form -------------------------------------------------------------

namespace {

Real sigma_form(const Real& s, const Real& v, const Real& d1, const Real& d2) {
  return 4 * square(s) * square(d2) + 4 * s * d1 * d2 + 8 * s * pow(d1, 3) -
         4 * v * square(d1) + square(d1);
}

}  // namespace

std::vector<SigmaFormRow> sigma_form_residual(const std::function<SigmaSample(const Real&)>& sigma,
                                              const std::vector<Real>& s_points) {
  std::vector<SigmaFormRow> rows;
  for (const auto& sp : s_points) {
    SigmaSample x = sigma(sp);
    SigmaFormRow row;
    row.s = x.s;
    row.sigma = x.sigma;
    row.d1 = x.d1;
    row.d2 = x.d2;
    row.residual = sigma_form(x.s, x.sigma, x.d1, x.d2);
    row.trivially_true = x.d1.is_zero() && x.d2.is_zero();
    Real bar(0, x.sigma.prec());
    for (int c = 0; c < 8; ++c) {
      Real v = x.sigma + ((c & 1) ? x.err0 : -x.err0);
      Real p = x.d1 + ((c & 2) ? x.err1 : -x.err1);
      Real q = x.d2 + ((c & 4) ? x.err2 : -x.err2);
      bar = max(bar, abs(sigma_form(x.s, v, p, q) - row.residual));
    }
    row.error_bar = bar;
    row.below_error_bar = row.trivially_true || abs(row.residual) <= bar;
    rows.push_back(row);
  }
  return rows;
}

SigmaSample sigma_n4_extrapolated(const Real& s_in, const std::vector<int>& n_list, const Real& alpha_in,
                                  const PrecisionConfig& cfg) {
  cfg.validate();
  const Bits bits = cfg.bits;
  if (n_list.size() < 2) throw UsageError("sigma extrapolation needs at least two n");
  const Real s = s_in.with_prec(bits), alpha = alpha_in.with_prec(bits);
  if (!(s > 0)) throw UsageError("s must be positive");
  std::vector<Real> v0, v1, v2;
  for (int n : n_list) {
    const Real n4 = pow(Real(n, bits), 4);
    auto f = [&](const Real& t) {
      return std::vector<Real>{build_aux(recurrence_table(n + 1, {alpha, t}, cfg)).sigma[n]};
    };
    auto j = differentiate(f, s / n4, 2, cfg)[0];
    v0.push_back(j.value);
    v1.push_back(j.d[1] / n4);
    v2.push_back(j.d[2] / square(n4));
  }
  std::vector<int> tail(n_list.begin() + 1, n_list.end());
  auto ext = [&](const std::vector<Real>& v, Real* err) {
    Real a = extrapolate(n_list, v, false);
    Real b = extrapolate(n_list, v, true);
    Real c = extrapolate(tail, std::vector<Real>(v.begin() + 1, v.end()), false);
    *err = max(abs(a - b), abs(a - c));
    return a;
  };
  SigmaSample out;
  out.s = s;
  out.sigma = ext(v0, &out.err0);
  out.d1 = ext(v1, &out.err1);
  out.d2 = ext(v2, &out.err2);
  return out;
}

// ---- Dyson constant -----------------------------------------------------------

DysonResult dyson_constant_experiment(const Real& alpha_in, const Real& s_lo_in, const Real& s_hi_in,
                                      const std::vector<int>& n_list, const PrecisionConfig& cfg) {
  cfg.validate();
  const Bits bits = cfg.bits;
  const Real alpha = alpha_in.with_prec(bits), s_lo = s_lo_in.with_prec(bits),
             s_hi = s_hi_in.with_prec(bits);
  if (!(s_lo > 0) || !(s_hi > s_lo)) throw UsageError("need 0 < s_lo < s_hi");

  DysonResult r;
  r.s_lo = s_lo;
  r.s_hi = s_hi;
  r.reference = dyson_constant(bits);
  r.barnes_sum = barnes_constant(mpq_class(1, 2), bits) + barnes_constant(mpq_class(-1, 2), bits);
  r.identity_residual = abs(r.barnes_sum - r.reference);

  auto lo_check = series_eval(SeriesKind::delta_small, s_lo, bits);
  if (!lo_check.in_regime) r.diagnostics.push_back(lo_check.diagnostic);
  auto hi_check = series_eval(SeriesKind::delta_large, s_hi, bits);
  if (!hi_check.in_regime) r.diagnostics.push_back(hi_check.diagnostic);

  // Sample points s_hi / 8, s_hi / 4, s_hi / 2, s_hi (those above s_lo).
  std::vector<Real> pts;
  for (int k = 3; k >= 0; --k) {
    Real sp = ldexp(s_hi, -k);
    if (sp > s_lo) pts.push_back(sp);
  }

  // III' route.
  {
    std::vector<PiiiTrajectory> tr;
    for (const mpq_class& a : {mpq_class(1, 2), mpq_class(-1, 2)}) {
      PiiiOptions opt;
      opt.s0 = s_lo;
      opt.sample_points = pts;
      tr.push_back(solve_piii_prime(a, s_hi, cfg, opt));
      const auto& t = tr.back();
      if (t.seed_truncation > cfg.tolerance())
        r.diagnostics.push_back("III' seed at s_lo truncation " + to_decimal(t.seed_truncation, 3) +
                                " (a=" + a.get_str() + ")");
      if (t.halted)
        r.diagnostics.push_back("III' trajectory a=" + a.get_str() + " halted: " + t.halt_reason +
                                " (last s=" + to_decimal(t.end.s, 8) + ")");
    }
    r.ode_ok = !tr[0].halted && !tr[1].halted;
    if (r.ode_ok) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        Real L = tr[0].samples[i].logDelta + tr[1].samples[i].logDelta;
        r.ode.push_back({pts[i], L, L - delta_large_nonconstant(pts[i], bits)});
      }
      r.ode_constant = r.ode.back().constant;
      r.ode_spread = r.ode.size() > 1 ? abs(r.ode.back().constant - r.ode[r.ode.size() - 2].constant)
                                      : Real(0, bits);
    } else {
      r.ode_constant = r.ode_spread = nan_like(bits);
    }
  }

  // Finite-n route.
  {
    Real bar(0, bits);
    bool ok = true;
    for (const auto& sp : pts) {
      try {
        auto sc = double_scaling_scan(sp, n_list, alpha, ScanMode::delta1, cfg);
        if (sc.n_list.size() != n_list.size()) ok = false;
        for (const auto& nt : sc.notes) r.diagnostics.push_back("finite-n s=" + to_decimal(sp, 6) + ": " + nt);
        r.finite_n.push_back({sp, sc.extrapolated, sc.extrapolated - delta_large_nonconstant(sp, bits)});
        bar = sc.error_bar;
      } catch (const NumericError& e) {
        ok = false;
        r.diagnostics.push_back(std::string("finite-n route: ") + e.what());
      }
    }
    r.finite_n_ok = ok && !r.finite_n.empty();
    if (r.finite_n_ok) {
      r.finite_n_constant = r.finite_n.back().constant;
      Real spread = r.finite_n.size() > 1
                        ? abs(r.finite_n.back().constant - r.finite_n[r.finite_n.size() - 2].constant)
                        : Real(0, bits);
      r.finite_n_error_bar = max(bar, spread);
    } else {
      r.finite_n_constant = r.finite_n_error_bar = nan_like(bits);
    }
  }
  return r;
}

}  // namespace hankelpv
