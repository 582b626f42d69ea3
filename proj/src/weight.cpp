#include "hankelpv/weight.hpp"

#include <climits>
#include <cmath>
#include <string>

#include "hankelpv/quadrature.hpp"
#include "hankelpv/special.hpp"

namespace hankelpv {

void WeightParams::validate() const {
  if (!(alpha > 0)) throw UsageError("alpha must be positive (got " + to_decimal(alpha, 12) + ")");
  if (t < 0) throw UsageError("t must be non-negative (got " + to_decimal(t, 12) + ")");
}

Real weight_at(const Real& x, const Real& one_minus_x, const WeightParams& p) {
  const Bits bits = std::max(x.prec(), one_minus_x.prec());
  if (one_minus_x.is_zero()) return Real(0, bits);
  Real base = pow(one_minus_x * (1 + x), p.alpha.with_prec(bits));
  if (p.t.is_zero()) return base;
  if (x.is_zero()) return Real(0, bits);
  Real e = p.t.with_prec(bits) / square(x);
  // e^{-e} below 2^{-4 bits}: treat as zero rather than chase tiny exponents
  if (e > Real(static_cast<long>(3 * bits), bits)) return Real(0, bits);
  return base * exp(-e);
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed-form";
    case Provenance::closed_form_escalated: return "closed-form-escalated";
    case Provenance::quadrature: return "quadrature";
  }
  return "?";
}

namespace {

struct GammaParts {
  Real ga;  // Gamma(1 + alpha)
  Real gb;  // Gamma((1 - j)/2)
  Real gc;  // Gamma((j + 3)/2 + alpha)
  Real gd;  // Gamma((j + 3)/2)
  Real tp;  // t^{(j+1)/2}
};

GammaParts direct_parts(int j, const WeightParams& p, Bits w) {
  Real a = p.alpha.with_prec(w), t = p.t.with_prec(w);
  Real half = Real::from_rational(1, 2, w);
  return {gamma(a + 1), gamma(Real::from_rational(1 - j, 2, w)),
          gamma(Real::from_rational(j + 3, 2, w) + a), gamma(Real::from_rational(j + 3, 2, w)),
          t.is_zero() ? Real(0, w) : pow(t, Real::from_rational(j + 1, 2, w))};
}

// The two bracketed Kummer terms of the even-j moment.
void kummer_terms(int j, const WeightParams& p, const GammaParts& g, Bits w, Real* t1, Real* t2) {
  Real a = p.alpha.with_prec(w), mt = -p.t.with_prec(w);
  *t1 = g.ga * kummer_phi(-Real::from_rational(j + 1, 2, w) - a, Real::from_rational(1 - j, 2, w), mt) /
        (g.gb * g.gc);
  if (p.t.is_zero())
    *t2 = Real(0, w);
  else
    *t2 = g.tp * kummer_phi(-a, Real::from_rational(j + 3, 2, w), mt) / g.gd;
}

long lost_bits(const Real& t1, const Real& t2, const Real& diff, Bits w) {
  if (t2.is_zero()) return 0;
  if (diff.is_zero()) return static_cast<long>(w);
  long top = std::max(t1.is_zero() ? LONG_MIN : t1.exponent(), t2.exponent());
  return std::max(0L, top - diff.exponent());
}

Moment finish(int j, const WeightParams& p, const PrecisionConfig& cfg, Real t1, Real t2, Bits w) {
  constexpr long kGuard = 64;
  Real diff = t1 - t2;
  long lost = lost_bits(t1, t2, diff, w);
  Moment m;
  m.cancelled_bits = lost;
  while (lost > static_cast<long>(w - cfg.bits) - 16) {
    Bits next = cfg.bits + lost + kGuard;
    if (next <= w) next = w + kGuard;
    if (next > 8 * cfg.bits) {
      PrecisionConfig qc = cfg;
      auto q = moments_quadrature(j, p, qc);
      return {q[j], Provenance::quadrature, lost};
    }
    w = next;
    kummer_terms(j, p, direct_parts(j, p, w), w, &t1, &t2);
    diff = t1 - t2;
    lost = lost_bits(t1, t2, diff, w);
  }
  const double half_target_bits = cfg.target_digits * std::log2(10.0) / 2;
  m.provenance = static_cast<double>(m.cancelled_bits) > half_target_bits
                     ? Provenance::closed_form_escalated
                     : Provenance::closed_form;
  Real v = diff * Real::pi(w);
  if ((j / 2) % 2 == 1) v = -v;
  m.value = v.with_prec(cfg.bits);
  return m;
}

}  // namespace

Moment moment_closed(int j, const WeightParams& p, const PrecisionConfig& cfg) {
  p.validate();
  if (j < 0) throw UsageError("moment index must be non-negative");
  if (j % 2 == 1) return {Real(0, cfg.bits), Provenance::closed_form, 0};
  const Bits w = cfg.bits + 64;
  Real t1, t2;
  kummer_terms(j, p, direct_parts(j, p, w), w, &t1, &t2);
  return finish(j, p, cfg, t1, t2, w);
}

MomentTable moments(int j_max, const WeightParams& p, const PrecisionConfig& cfg) {
  p.validate();
  const Bits w = cfg.bits + 64;
  MomentTable tab{p, {}};
  tab.mu.reserve(j_max + 1);
  GammaParts g = direct_parts(0, p, w);
  Real a = p.alpha.with_prec(w), t = p.t.with_prec(w);
  for (int j = 0; j <= j_max; ++j) {
    if (j % 2 == 1) {
      tab.mu.push_back({Real(0, cfg.bits), Provenance::closed_form, 0});
      continue;
    }
    if (j > 0) {
      // advance the Gamma factors from j-2 to j
      const long m = j / 2;
      g.gb /= Real::from_rational(1, 2, w) - m;
      g.gc *= Real::from_rational(2 * m + 1, 2, w) + a;
      g.gd *= Real::from_rational(2 * m + 1, 2, w);
      g.tp *= t;
    }
    Real t1, t2;
    kummer_terms(j, p, g, w, &t1, &t2);
    tab.mu.push_back(finish(j, p, cfg, t1, t2, w));
  }
  return tab;
}

std::vector<Real> moments_quadrature(int j_max, const WeightParams& p, const PrecisionConfig& cfg) {
  p.validate();
  const std::size_t dim = static_cast<std::size_t>(j_max) + 1;
  auto f = [&](const QuadNode& nd, std::vector<Real>& out) {
    Real w = weight_at(nd.x, nd.from_b, p) * 2;
    Real x2 = square(nd.x);
    for (std::size_t j = 0; j < dim; ++j) {
      if (j % 2 == 1) {
        out[j] = Real(0, w.prec());
        continue;
      }
      out[j] = w;
      w *= x2;
    }
  };
  return integrate_vector(f, dim, Real(0, cfg.bits), Real(1, cfg.bits), cfg).values;
}

Bits hankel_guard_bits(int n) { return 3 * static_cast<Bits>(n) + 64; }

namespace {

// Pivots of A = L D L^T for a symmetric positive-definite matrix given by
// entry(i, k).  Returns false on a non-positive pivot.
template <class Entry>
bool ldlt_pivots(int m, Entry entry, std::vector<Real>& d) {
  d.clear();
  std::vector<std::vector<Real>> L(m);
  for (int k = 0; k < m; ++k) {
    L[k].resize(k + 1);
    for (int i = 0; i < k; ++i) {
      // L[k][i] * d[i] = A[k][i] - sum_{l<i} L[k][l] L[i][l] d[l]
      Real s = entry(k, i);
      for (int l = 0; l < i; ++l) s -= L[k][l] * L[i][l] * d[l];
      L[k][i] = s / d[i];
    }
    Real s = entry(k, k);
    for (int l = 0; l < k; ++l) s -= square(L[k][l]) * d[l];
    if (!(s > 0)) return false;
    d.push_back(s);
  }
  return true;
}

// Squared norms h_0 .. h_{n-1} from the parity blocks of the n x n Hankel
// matrix (even block: mu_{2(i+k)} -> h_{2i}; odd block: mu_{2(i+k)+2} ->
// h_{2i+1}).
bool block_pivots(int n, const MomentTable& mu, std::vector<Real>& h) {
  const int me = (n + 1) / 2, mo = n / 2;
  std::vector<Real> de, dd;
  if (!ldlt_pivots(me, [&](int i, int k) { return mu[2 * (i + k)]; }, de)) return false;
  if (!ldlt_pivots(mo, [&](int i, int k) { return mu[2 * (i + k) + 2]; }, dd)) return false;
  h.assign(n, Real());
  for (int i = 0; i < me; ++i) h[2 * i] = de[i];
  for (int i = 0; i < mo; ++i) h[2 * i + 1] = dd[i];
  return true;
}

std::vector<Real> norms(int n, const WeightParams& p, const PrecisionConfig& cfg) {
  Bits guard = hankel_guard_bits(n);
  for (int attempt = 0; attempt < 2; ++attempt, guard *= 2) {
    PrecisionConfig wc = cfg.with_bits(cfg.bits + guard);
    MomentTable mu = moments(std::max(2 * n - 2, 0), p, wc);
    std::vector<Real> h;
    if (block_pivots(n, mu, h)) return h;
  }
  throw NumericError(Failure::precision_exhausted,
                     "non-positive Hankel pivot at n=" + std::to_string(n) + " with " +
                         std::to_string(cfg.bits + guard) + " bits");
}

}  // namespace

HankelDet hankel_det(int n, const WeightParams& p, const PrecisionConfig& cfg) {
  p.validate();
  if (n < 1) throw UsageError("hankel_det needs n >= 1");
  std::vector<Real> h = norms(n, p, cfg);
  Real s(0, h[0].prec());
  for (auto& v : h) s += log(v);
  return {s.with_prec(cfg.bits), 1};
}

RecurrenceTable recurrence_table(int n_max, const WeightParams& p, const PrecisionConfig& cfg) {
  p.validate();
  if (n_max < 1) throw UsageError("recurrence_table needs n_max >= 1");
  std::vector<Real> h = norms(n_max + 1, p, cfg);
  const Bits w = h[0].prec();
  RecurrenceTable tab;
  tab.params = p;
  tab.n_max = n_max;
  Real p1(0, w), logd(0, w);
  tab.p1.push_back(p1.with_prec(cfg.bits));
  tab.log_d.push_back(logd.with_prec(cfg.bits));
  for (int n = 0; n <= n_max; ++n) {
    Real beta = n == 0 ? Real(0, w) : h[n] / h[n - 1];
    p1 -= beta;
    logd += log(h[n]);
    tab.h.push_back(h[n].with_prec(cfg.bits));
    tab.beta.push_back(beta.with_prec(cfg.bits));
    tab.p1.push_back(p1.with_prec(cfg.bits));
    tab.log_d.push_back(logd.with_prec(cfg.bits));
  }
  return tab;
}

std::vector<PolynomialEval> eval_polys(int n, const Real& x, const RecurrenceTable& table) {
  if (n < 0 || n > table.n_max + 1) throw UsageError("polynomial degree outside the table");
  const Bits b = table.h[0].prec();
  Real xv = x.with_prec(std::max(b, x.prec()));
  std::vector<PolynomialEval> out;
  Real pm(0, b), dm(0, b), ddm(0, b);
  Real pc(1, b), dc(0, b), ddc(0, b);
  for (int k = 0; k <= n; ++k) {
    out.push_back({k, xv, pc, dc, ddc});
    if (k == n) break;
    const Real& bk = table.beta[k];
    Real pn = xv * pc - bk * pm;
    Real dn = pc + xv * dc - bk * dm;
    Real ddn = 2 * dc + xv * ddc - bk * ddm;
    pm = std::move(pc), dm = std::move(dc), ddm = std::move(ddc);
    pc = std::move(pn), dc = std::move(dn), ddc = std::move(ddn);
  }
  return out;
}

PolynomialEval eval_poly(int n, const Real& x, const RecurrenceTable& table) {
  return eval_polys(n, x, table).back();
}

Real hankel_det_t0(int n, const Real& alpha, const PrecisionConfig& cfg) {
  if (n < 1) throw UsageError("hankel_det_t0 needs n >= 1");
  if (!(alpha > 0)) throw UsageError("alpha must be positive");
  const Bits w = cfg.bits + 32;
  Real a = alpha.with_prec(w);
  Real r = Real(n, w) * (a * 2 + n) * Real::ln2(w);
  if ((a * 2).is_integer()) {
    r += log_barnes_g(Real(n + 1, w)) + log_barnes_g(a * 2 + (n + 1)) +
         2 * log_barnes_g(a + (n + 1)) - log_barnes_g(a * 2 + (2 * n + 1)) -
         2 * log_barnes_g(a + 1);
  } else {
    r -= log_gamma(Real(n + 1, w));
    for (int j = 1; j <= n; ++j)
      r += log_gamma(Real(j + 1, w)) + 2 * log_gamma(a + j) - log_gamma(a * 2 + (j + n));
  }
  return r.with_prec(cfg.bits);
}

}  // namespace hankelpv
