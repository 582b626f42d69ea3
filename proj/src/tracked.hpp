// Tracked arithmetic and report-row helpers shared by the verification
// modules.
#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "hankelpv/verify.hpp"

namespace hankelpv::detail {

// A value together with a bound on the magnitude of the terms it was built
// from.  |v| / m measures how far a would-be zero sits above roundoff.
struct Tracked {
  Real v, m;
};

inline Tracked K(const Real& x) { return {x, abs(x)}; }
inline Tracked K(long c, Bits b) { return {Real(c, b), abs(Real(c, b))}; }

inline Tracked operator+(const Tracked& a, const Tracked& b) { return {a.v + b.v, a.m + b.m}; }
inline Tracked operator-(const Tracked& a, const Tracked& b) { return {a.v - b.v, a.m + b.m}; }
inline Tracked operator-(const Tracked& a) { return {-a.v, a.m}; }
inline Tracked operator*(const Tracked& a, const Tracked& b) { return {a.v * b.v, a.m * b.m}; }
// First-order propagation: |a/b| (m_a/|a| + m_b/|b|).
inline Tracked operator/(const Tracked& a, const Tracked& b) {
  if (b.v.is_zero()) throw NumericError(Failure::pole, "division by an exact zero");
  Real ab = abs(b.v);
  return {a.v / b.v, a.m / ab + abs(a.v) * b.m / square(ab)};
}
inline Tracked operator+(const Tracked& a, long c) { return {a.v + c, a.m + std::labs(c)}; }
inline Tracked operator+(long c, const Tracked& a) { return a + c; }
inline Tracked operator-(const Tracked& a, long c) { return {a.v - c, a.m + std::labs(c)}; }
inline Tracked operator-(long c, const Tracked& a) { return {c - a.v, a.m + std::labs(c)}; }
inline Tracked operator*(const Tracked& a, long c) { return {a.v * c, a.m * std::labs(c)}; }
inline Tracked operator*(long c, const Tracked& a) { return a * c; }
inline Tracked sq(const Tracked& a) { return a * a; }
inline Tracked pw(const Tracked& a, int k) {
  Tracked r = a;
  for (int i = 1; i < k; ++i) r = r * a;
  return r;
}

inline VerificationRow make_row(const std::string& id, int n, const WeightParams& p,
                         const PrecisionConfig& cfg, const Tracked& diff) {
  VerificationRow row;
  row.identity = id;
  row.n = n;
  row.alpha = p.alpha;
  row.t = p.t;
  row.bits = cfg.bits;
  row.lhs_scale = diff.m;
  if (diff.m.is_zero()) {
    row.trivially_true = true;
    row.residual = Real(0, cfg.bits);
    row.pass = true;
    return row;
  }
  row.residual = abs(diff.v) / diff.m;
  row.pass = row.residual <= cfg.residual_threshold();
  return row;
}

inline VerificationRow failed_row(const std::string& id, int n, const WeightParams& p,
                           const PrecisionConfig& cfg, const std::string& why) {
  VerificationRow row;
  row.identity = id;
  row.n = n;
  row.alpha = p.alpha;
  row.t = p.t;
  row.bits = cfg.bits;
  row.lhs_scale = Real(0, cfg.bits);
  row.residual = Real::nan(cfg.bits);
  row.note = why;
  return row;
}

// Identity of the form P^2 = Q.  Reports the better of P = +sqrt(Q) and
// P = -sqrt(Q); the squared residual goes into the note.
inline VerificationRow squared_row(const std::string& id, int n, const WeightParams& p,
                            const PrecisionConfig& cfg, const Tracked& P, const Tracked& Q) {
  VerificationRow sq_row = make_row(id, n, p, cfg, P * P - Q);
  if (sq_row.trivially_true || Q.v < 0) {
    sq_row.branch = "none";
    if (Q.v < 0) sq_row.note = "negative radicand; squared form reported";
    return sq_row;
  }
  Real root = sqrt(Q.v), scale = P.m + sqrt(Q.m);
  Real rp = abs(P.v - root) / scale, rm = abs(P.v + root) / scale;
  VerificationRow row = sq_row;
  row.lhs_scale = scale;
  row.residual = rp <= rm ? rp : rm;
  row.branch = rp <= rm ? "+" : "-";
  row.pass = row.residual <= cfg.residual_threshold();
  row.note = "squared-form residual " + to_decimal(sq_row.residual, 3);
  return row;
}

template <class F>
void guarded(std::vector<VerificationRow>& rows, const std::string& id, int n,
             const WeightParams& p, const PrecisionConfig& cfg, F&& body) {
  try {
    rows.push_back(body());
  } catch (const NumericError& e) {
    rows.push_back(failed_row(id, n, p, cfg, e.what()));
  }
}

// Keeps the worst of several rows for the same identity and n.
inline void fold_worst(VerificationRow& acc, const VerificationRow& r, bool first) {
  if (first || (!r.trivially_true && (acc.trivially_true || r.residual > acc.residual))) acc = r;
}

}  // namespace hankelpv::detail
