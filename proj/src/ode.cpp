#include "hankelpv/ode.hpp"

#include <cmath>

namespace hankelpv {

namespace {

constexpr int kStages = 12;

using Vec = std::vector<Real>;

struct Stepper {
  const OdeProblem& p;
  Bits w;
  long evals = 0;

  void rhs(const Real& x, const Vec& y, Vec& dy) {
    p.rhs(x, y, dy);
    ++evals;
  }

  // One extrapolated step of size H from (x, y); returns the result and a
  // scaled error estimate.
  Real step(const Real& x, const Vec& y, const Vec& f0, const Real& H, Vec& out) {
    const std::size_t n = y.size();
    std::vector<Vec> T(kStages);
    Vec zprev(n), zcur(n), znext(n), fz(n);
    for (int j = 0; j < kStages; ++j) {
      const long m = 2 * (j + 1);
      Real h = H / m;
      for (std::size_t i = 0; i < n; ++i) {
        zprev[i] = y[i];
        zcur[i] = y[i] + h * f0[i];
      }
      for (long k = 1; k < m; ++k) {
        rhs(x + h * k, zcur, fz);
        for (std::size_t i = 0; i < n; ++i) {
          znext[i] = zprev[i] + 2 * h * fz[i];
          zprev[i] = std::move(zcur[i]);
          zcur[i] = std::move(znext[i]);
        }
      }
      T[j] = zcur;
    }
    // Aitken-Neville in h^2 with n_j = 2(j+1).
    Vec lower;
    for (int k = 1; k < kStages; ++k) {
      for (int j = kStages - 1; j >= k; --j) {
        long nj = 2 * (j + 1), njk = 2 * (j - k + 1);
        Real r = Real::from_rational(nj * nj, njk * njk, w) - 1;
        for (std::size_t i = 0; i < n; ++i) T[j][i] += (T[j][i] - T[j - 1][i]) / r;
      }
      if (k == kStages - 2) lower = T[kStages - 1];
    }
    out = T[kStages - 1];
    Real err(0, w);
    for (std::size_t i = 0; i < n; ++i) {
      Real e = abs(out[i] - lower[i]) / (1 + abs(out[i]));
      if (!e.is_finite()) return Real::nan(w);
      if (e > err) err = e;
    }
    return err;
  }
};

}  // namespace

OdeTrajectory solve_ode(const OdeProblem& p, const PrecisionConfig& cfg) {
  if (p.y0.size() != p.dimension) throw UsageError("initial state has wrong dimension");
  if (p.tolerance < pow10(cfg.target_digits, cfg.bits) / 2)
    throw UsageError("ODE tolerance finer than 10^-target_digits");
  const Bits w = cfg.bits + 32;
  Stepper st{p, w};
  OdeTrajectory traj;

  Real x = p.x0.with_prec(w);
  Vec y;
  for (auto& v : p.y0) y.push_back(v.with_prec(w));
  const Real xend = p.x_end.with_prec(w);
  const int dir = xend >= x ? 1 : -1;
  const Real tol = p.tolerance.with_prec(w);
  const double order = 2.0 * kStages - 1;

  auto rounded = [&](const Real& xx, const Vec& yy) {
    OdeSample s{xx.with_prec(cfg.bits), {}};
    for (auto& v : yy) s.y.push_back(v.with_prec(cfg.bits));
    return s;
  };

  for (auto& sp : p.sample_points)
    if ((sp - x) * dir < 0 || (sp - xend) * dir > 0)
      throw UsageError("ODE sample point outside the integration interval");
  std::size_t next_sample = 0;
  auto emit_samples = [&]() {
    while (next_sample < p.sample_points.size() && (p.sample_points[next_sample] - x) * dir <= 0) {
      traj.samples.push_back(rounded(x, y));
      ++next_sample;
    }
  };
  emit_samples();

  Real natural = min(abs(xend - x), (1 + abs(x)) / 64) * dir;
  Vec f0(p.dimension), ynew(p.dimension);
  while ((xend - x) * dir > 0) {
    Real target = xend;
    if (next_sample < p.sample_points.size()) target = p.sample_points[next_sample].with_prec(w);
    Real H = natural;
    bool clipped = false;
    if ((x + H - target) * dir >= 0) {
      H = target - x;
      clipped = true;
    }
    if (abs(H) < (abs(x) + 1) * ldexp(Real(1, w), -static_cast<long>(cfg.bits) / 2))
      throw OdeHalt(Failure::step_underflow, "step size underflow at x=" + to_decimal(x, 20),
                    rounded(x, y), traj.samples);
    st.rhs(x, y, f0);
    Real err = st.step(x, y, f0, H, ynew);
    Real allowed = tol * abs(H);
    if (err.is_nan() || err > allowed) {
      ++traj.rejected;
      double fac = 0.2;
      if (!err.is_nan() && !err.is_zero())
        fac = std::max(0.2, 0.9 * std::pow((allowed / err).to_double(), 1.0 / order));
      natural = H * Real::from_double(fac, w);
      continue;
    }
    Real xnew = clipped ? target : x + H;
    if (p.guard) {
      if (auto why = p.guard(xnew, ynew))
        throw OdeHalt(Failure::ode_guard, *why + " at x=" + to_decimal(xnew, 20), rounded(x, y),
                      traj.samples);
    }
    x = xnew;
    y = ynew;
    ++traj.steps;
    emit_samples();
    double fac = 4.0;
    if (!err.is_zero()) fac = std::min(4.0, 0.9 * std::pow((allowed / err).to_double(), 1.0 / order));
    fac = std::max(fac, 0.2);
    if (!clipped) natural = H * Real::from_double(fac, w);
    else if (fac < 1.0) natural = min(abs(natural), abs(H) * Real::from_double(fac, w)) * dir;
  }
  traj.end = rounded(x, y);
  traj.rhs_evaluations = st.evals;
  return traj;
}

}  // namespace hankelpv
