#include "hankelpv/bridge.hpp"

#include <string>

#include "hankelpv/aux.hpp"
#include "hankelpv/differentiate.hpp"
#include "hankelpv/quadrature.hpp"
#include "hankelpv/weight.hpp"
#include "tracked.hpp"

namespace hankelpv {

using namespace detail;

void TildeParams::validate() const {
  if (!(b > 0)) throw UsageError("tilde weight needs b > 0");
  if (t < 0) throw UsageError("tilde weight needs t >= 0");
  if (!(a > -1)) throw UsageError("tilde weight needs a > -1");
}

const std::vector<std::string>& bridge_ids() {
  static const std::vector<std::string> ids = {"hd1", "hd2", "rela1", "rela2", "re3", "re4", "rs1",
                                               "rs2", "dou1", "dou2", "de1", "de2", "hn", "hn-jmo"};
  return ids;
}

namespace {

// x^a (1-x)^b e^{-t/x}.
Real tilde_weight(const Real& x, const Real& one_minus_x, const TildeParams& tp) {
  const Bits bits = std::max(x.prec(), one_minus_x.prec());
  if (x.is_zero() || one_minus_x.is_zero()) return Real(0, bits);
  Real w = pow(x, tp.a.with_prec(bits)) * pow(one_minus_x, tp.b.with_prec(bits));
  if (tp.t.is_zero()) return w;
  Real e = tp.t.with_prec(bits) / x;
  if (e > Real(static_cast<long>(3 * bits), bits)) return Real(0, bits);
  return w * exp(-e);
}

struct Ldl {
  std::vector<Real> d;  // pivots
  std::vector<Real> c;  // coefficient of x^{j-1} in the monic P_j
};

// LDL^T of the m x m Hankel matrix (mu_{i+k}); with_coeffs also inverts L.
Ldl hankel_ldl(const std::vector<Real>& mu, int m, bool with_coeffs) {
  if (static_cast<int>(mu.size()) < 2 * m - 1) throw UsageError("not enough tilde moments");
  std::vector<std::vector<Real>> L(m, std::vector<Real>(m));
  Ldl out;
  for (int j = 0; j < m; ++j) {
    Real dj = mu[2 * j];
    for (int k = 0; k < j; ++k) dj -= square(L[j][k]) * out.d[k];
    if (!(dj > 0))
      throw NumericError(Failure::precision_exhausted, "non-positive tilde Hankel pivot at j=" + std::to_string(j));
    out.d.push_back(dj);
    for (int i = j + 1; i < m; ++i) {
      Real v = mu[i + j];
      for (int k = 0; k < j; ++k) v -= L[i][k] * L[j][k] * out.d[k];
      L[i][j] = v / dj;
    }
  }
  if (!with_coeffs) return out;
  // C = L^{-1}; only the first subdiagonal is needed, but it depends on
  // the full inverse.
  std::vector<std::vector<Real>> C(m, std::vector<Real>(m));
  const Bits b = mu[0].prec();
  for (int j = 0; j < m; ++j) {
    C[j][j] = Real(1, b);
    for (int k = j - 1; k >= 0; --k) {
      Real s(0, b);
      for (int i = k; i < j; ++i) s -= L[j][i] * C[i][k];
      C[j][k] = s;
    }
  }
  out.c.push_back(Real(0, b));
  for (int j = 1; j < m; ++j) out.c.push_back(C[j][j - 1]);
  return out;
}

std::vector<Real> log_dets(const std::vector<Real>& d, int count) {
  std::vector<Real> out{Real(0, d[0].prec())};
  for (int n = 1; n <= count; ++n) out.push_back(out.back() + log(d[n - 1]));
  return out;
}

}  // namespace

std::vector<Real> tilde_moments(int j_max, const TildeParams& tp, const PrecisionConfig& cfg,
                                int fixed_level, int* level_used) {
  tp.validate();
  const std::size_t dim = j_max + 1;
  auto f = [&](const QuadNode& nd, std::vector<Real>& out) {
    Real w = tilde_weight(nd.x, nd.from_b, tp);
    for (std::size_t j = 0; j < dim; ++j) {
      out[j] = w;
      w *= nd.x;
    }
  };
  auto res = integrate_vector(f, dim, Real(0, cfg.bits), Real(1, cfg.bits), cfg, fixed_level);
  if (level_used) *level_used = res.level;
  return res.values;
}

TildeTable tilde_moments_and_table(int n_max, const TildeParams& tp, const PrecisionConfig& cfg,
                                   bool with_derivatives) {
  tp.validate();
  if (n_max < 0) throw UsageError("n_max must be >= 0");
  const int m = n_max + 2;
  // Hankel matrices on [0,1] lose about 1.5 bits per unit of size; the
  // moments are integrated to the full precision of the configuration.
  PrecisionConfig qc;
  qc.bits = cfg.bits + hankel_guard_bits(2 * m);
  qc.target_digits = PrecisionConfig::max_target_digits(cfg.bits);
  const Bits wb = qc.bits;
  TildeParams tw{tp.a.with_prec(wb), tp.b.with_prec(wb), tp.t.with_prec(wb)};

  TildeTable tab;
  tab.params = tp;
  tab.n_max = n_max;
  auto mu = tilde_moments(2 * m - 2, tw, qc, -1, &tab.quad_level);
  Ldl f = hankel_ldl(mu, m, true);
  auto rnd = [&](const Real& x) { return x.with_prec(cfg.bits); };
  for (const auto& x : mu) tab.mu.push_back(rnd(x));
  auto ld = log_dets(f.d, n_max + 1);
  for (int n = 0; n <= n_max; ++n) tab.tilde_h.push_back(rnd(f.d[n]));
  for (const auto& x : ld) tab.tilde_logD.push_back(rnd(x));
  for (int j = 0; j <= n_max; ++j) {
    tab.rec_a.push_back(f.c[j] - f.c[j + 1]);
    tab.rec_b.push_back(j == 0 ? Real(0, wb) : f.d[j] / f.d[j - 1]);
  }

  // R*_n and R~_n from their integrals, with the recurrence above.
  {
    const std::size_t dim = 2 * (n_max + 1);
    auto g = [&](const QuadNode& nd, std::vector<Real>& out) {
      Real w = tilde_weight(nd.x, nd.from_b, tw);
      if (w.is_zero()) {
        for (auto& o : out) o = Real(0, wb);
        return;
      }
      auto P = eval_tilde_polys(n_max, nd.x, tab);
      Real w1 = w / nd.x, w2 = w / nd.from_b;
      for (int n = 0; n <= n_max; ++n) {
        Real p2 = square(P[n]);
        out[2 * n] = p2 * w1;
        out[2 * n + 1] = p2 * w2;
      }
    };
    PrecisionConfig rc = qc;
    rc.target_digits = std::min(qc.target_digits, cfg.target_digits + 20);
    auto res = integrate_vector(g, dim, Real(0, wb), Real(1, wb), rc);
    for (int n = 0; n <= n_max; ++n) {
      tab.Rstar.push_back(rnd(tw.t * res.values[2 * n] / f.d[n]));
      tab.Rtilde.push_back(rnd(tw.b * res.values[2 * n + 1] / f.d[n]));
    }
  }

  const Real zero(0, cfg.bits);
  if (!with_derivatives || tp.t.is_zero()) {
    tab.H.assign(n_max + 2, zero);
    tab.dH.assign(n_max + 2, zero);
    tab.d2H.assign(n_max + 2, zero);
    return tab;
  }
  // ln D_n(t') on the converged rule, so stencil values differ only by t'.
  auto logd = [&](const Real& tt) {
    TildeParams q{tw.a, tw.b, tt.with_prec(wb)};
    auto mu_t = tilde_moments(2 * n_max, q, qc, tab.quad_level);
    return log_dets(hankel_ldl(mu_t, n_max + 1, false).d, n_max + 1);
  };
  auto jets = differentiate(logd, tp.t.with_prec(cfg.bits), 3, cfg);
  const Real t = tp.t.with_prec(cfg.bits);
  for (int n = 0; n <= n_max + 1; ++n) {
    const Jet& J = jets[n];
    tab.H.push_back(t * J.d[1]);
    tab.dH.push_back(J.d[1] + t * J.d[2]);
    tab.d2H.push_back(2 * J.d[2] + t * J.d[3]);
  }
  return tab;
}

std::vector<Real> eval_tilde_polys(int n, const Real& x, const TildeTable& table) {
  if (n < 0 || n > table.n_max + 1) throw UsageError("tilde polynomial degree outside the table");
  const Bits b = std::max(x.prec(), table.rec_a[0].prec());
  std::vector<Real> P{Real(1, b)};
  if (n == 0) return P;
  P.push_back(x - table.rec_a[0]);
  for (int j = 1; j < n; ++j) P.push_back((x - table.rec_a[j]) * P[j] - table.rec_b[j] * P[j - 1]);
  return P;
}

std::vector<VerificationRow> verify_jmo_sigma_form(const std::vector<int>& n_list,
                                                   const TildeTable& table,
                                                   const PrecisionConfig& cfg) {
  const Bits bits = cfg.bits;
  const TildeParams& tp = table.params;
  const WeightParams wp{tp.b, tp.t};
  const Tracked a = K(tp.a.with_prec(bits)), b = K(tp.b.with_prec(bits)), t = K(tp.t.with_prec(bits));
  const std::string tag = "a=" + to_decimal(tp.a, 3);
  std::vector<VerificationRow> rows;
  for (int n : n_list) {
    if (n < 0 || n > table.n_max + 1) throw UsageError("n outside the tilde table");
    const Tracked nn = K(Real(n, bits));
    const Tracked H = K(table.H[n]), H1 = K(table.dH[n]), H2 = K(table.d2H[n]);
    const Tracked nab = nn * (nn + a + b);
    guarded(rows, "hn", n, wp, cfg, [&] {
      Tracked Q = sq(nab - H + (a + t) * H1) + 4 * H1 * (t * H1 - H) * (b - H1);
      auto row = squared_row("hn", n, wp, cfg, t * H2, Q);
      row.note = tag + "; " + row.note;
      return row;
    });
    guarded(rows, "hn-jmo", n, wp, cfg, [&] {
      const Tracked Ht = H - nab;  // shifted sigma function
      const Tracked c = a + 2 * b + t;
      Tracked Q = -4 * t * pw(H1, 3) +
                  sq(H1) * (4 * Ht + sq(c) + 4 * nab - 4 * b * (a + b)) -
                  2 * H1 * (c * Ht + 2 * nn * b * (nn + a + b)) + sq(Ht);
      auto row = squared_row("hn-jmo", n, wp, cfg, t * H2, Q);
      row.note = tag + "; nu = (0, " + to_decimal(-(nn.v + a.v + b.v), 6) +
                 ", " + std::to_string(n) + ", " + to_decimal(-tp.b, 6) + "); " + row.note;
      return row;
    });
  }
  return rows;
}

std::vector<VerificationRow> verify_parity_splitting(int n_max, const WeightParams& p,
                                                     const PrecisionConfig& cfg) {
  p.validate();
  const Bits bits = cfg.bits;
  const Real half = Real::from_rational(1, 2, bits);
  const Real al = p.alpha.with_prec(bits);
  TildeTable tm = tilde_moments_and_table(n_max, {-half, al, p.t}, cfg);
  TildeTable tpl = tilde_moments_and_table(n_max, {half, al, p.t}, cfg);
  RecurrenceTable main = recurrence_table(2 * n_max + 2, p, cfg);
  AuxTable aux = build_aux(main);

  const Tracked A = K(al), Hf = K(half);
  const Tracked one{Real(0, bits), Real(1, bits)};  // unit scale for log-determinants
  auto zs = default_ladder_points(bits);
  std::vector<VerificationRow> rows;
  auto rel = [](const Real& l, const Real& r) { return K(l) - K(r); };
  auto logrel = [&](const Real& l, const Real& r) {
    if (l.is_zero() && r.is_zero()) return Tracked{Real(0, bits), Real(0, bits)};
    return Tracked{l - r, one.m};
  };
  for (int n = 0; n <= n_max; ++n) {
    const Tracked nn = K(Real(n, bits));
    guarded(rows, "hd1", n, p, cfg, [&] {
      auto row = make_row("hd1", n, p, cfg,
                          logrel(main.log_d[2 * n], tpl.tilde_logD[n] + tm.tilde_logD[n]));
      row.note = "relative error of D";
      return row;
    });
    guarded(rows, "hd2", n, p, cfg, [&] {
      auto row = make_row("hd2", n, p, cfg,
                          logrel(main.log_d[2 * n + 1], tpl.tilde_logD[n] + tm.tilde_logD[n + 1]));
      row.note = "relative error of D";
      return row;
    });
    guarded(rows, "rela1", n, p, cfg, [&] { return make_row("rela1", n, p, cfg, rel(main.h[2 * n], tm.tilde_h[n])); });
    guarded(rows, "rela2", n, p, cfg, [&] { return make_row("rela2", n, p, cfg, rel(main.h[2 * n + 1], tpl.tilde_h[n])); });
    guarded(rows, "re3", n, p, cfg, [&] {
      return make_row("re3", n, p, cfg, K(aux.sigma[2 * n]) - 2 * (K(tpl.H[n]) + K(tm.H[n])));
    });
    guarded(rows, "re4", n, p, cfg, [&] {
      return make_row("re4", n, p, cfg, K(aux.sigma[2 * n + 1]) - 2 * (K(tpl.H[n]) + K(tm.H[n + 1])));
    });
    // H~_n(t, a, b) = H_n - n (n + a + b)
    auto Ht = [&](const TildeTable& tab, int k, const Tracked& a) {
      const Tracked kk = K(Real(k, bits));
      return K(tab.H[k]) - kk * (kk + a + A);
    };
    guarded(rows, "rs1", n, p, cfg, [&] {
      Tracked rhs = 2 * (Ht(tpl, n, Hf) + Ht(tm, n, -Hf) + 2 * nn * (nn + A));
      return make_row("rs1", n, p, cfg, K(aux.sigma[2 * n]) - rhs);
    });
    guarded(rows, "rs2", n, p, cfg, [&] {
      Tracked rhs = 2 * (Ht(tpl, n, Hf) + Ht(tm, n + 1, -Hf) + (2 * nn + 1) * (nn + A + Hf));
      return make_row("rs2", n, p, cfg, K(aux.sigma[2 * n + 1]) - rhs);
    });
    guarded(rows, "dou1", n, p, cfg, [&] {
      auto r1 = make_row("dou1", n, p, cfg, K(aux.R[2 * n]) - 2 * K(tm.Rstar[n]));
      auto r2 = make_row("dou1", n, p, cfg, K(aux.R[2 * n]) - 2 * (K(tm.Rtilde[n]) - 2 * nn - Hf - A));
      fold_worst(r1, r2, false);
      r1.note = "worse of the R* and R~ forms";
      return r1;
    });
    guarded(rows, "dou2", n, p, cfg, [&] {
      auto r1 = make_row("dou2", n, p, cfg, K(aux.R[2 * n + 1]) - 2 * K(tpl.Rstar[n]));
      auto r2 = make_row("dou2", n, p, cfg,
                         K(aux.R[2 * n + 1]) - 2 * (K(tpl.Rtilde[n]) - 2 * nn - 3 * Hf - A));
      fold_worst(r1, r2, false);
      r1.note = "worse of the R* and R~ forms";
      return r1;
    });
    guarded(rows, "de1", n, p, cfg, [&] {
      VerificationRow worst;
      bool first = true;
      for (const Real& y : zs) {
        Real x = square(y);
        auto row = make_row("de1", n, p, cfg, K(eval_tilde_polys(n, x, tm)[n]) - K(eval_poly(2 * n, y, main).value));
        fold_worst(worst, row, first);
        first = false;
      }
      worst.note = "worst of " + std::to_string(zs.size()) + " points";
      return worst;
    });
    guarded(rows, "de2", n, p, cfg, [&] {
      VerificationRow worst;
      bool first = true;
      for (const Real& y : zs) {
        Real x = square(y);
        auto row = make_row("de2", n, p, cfg,
                            K(eval_tilde_polys(n, x, tpl)[n] * y) - K(eval_poly(2 * n + 1, y, main).value));
        fold_worst(worst, row, first);
        first = false;
      }
      worst.note = "worst of " + std::to_string(zs.size()) + " points";
      return worst;
    });
  }
  std::vector<int> ns;
  for (int n = 0; n <= n_max; ++n) ns.push_back(n);
  for (const auto* tab : {&tm, &tpl}) {
    auto jr = verify_jmo_sigma_form(ns, *tab, cfg);
    rows.insert(rows.end(), jr.begin(), jr.end());
  }
  return rows;
}

}  // namespace hankelpv
