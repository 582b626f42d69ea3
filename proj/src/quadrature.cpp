#include "hankelpv/quadrature.hpp"

#include <cmath>
#include <string>

namespace hankelpv {

namespace {

constexpr int kMinLevel = 3;
constexpr int kMaxLevel = 11;

struct Accum {
  std::vector<Real> sum;
  std::vector<Real> mass;
};

}  // namespace

QuadratureResult integrate_vector(const VectorIntegrand& f, std::size_t dim, const Real& a,
                                  const Real& b, const PrecisionConfig& cfg, int fixed_level,
                                  QuadStop stop) {
  const Bits w = cfg.bits + 16;
  const Real aw = a.with_prec(w), bw = b.with_prec(w);
  const Real half_len = (bw - aw) / 2;
  const Real half_pi = Real::pi(w) / 2;
  // Beyond u_max the weight is below 2^-(4 w); e^{-2v} with v = pi/2 sinh u.
  const double u_max =
      std::asinh(4.0 * static_cast<double>(w) * std::log(2.0) / M_PI);

  Accum acc{std::vector<Real>(dim, Real(0, w)), std::vector<Real>(dim, Real(0, w))};
  std::vector<Real> fx(dim, Real(0, w));
  QuadratureResult res;

  auto add_node = [&](const Real& u) {
    Real vv = half_pi * sinh(u);
    Real q = exp(-2 * vv);
    Real onepq = 1 + q;
    Real delta = 2 * q / onepq;
    Real weight = half_pi * cosh(u) * 4 * q / square(onepq) * half_len;
    Real dd = half_len * delta;
    Real far = half_len * 2 - dd;
    // right node (x near b)
    {
      QuadNode nd{bw - dd, far, dd};
      f(nd, fx);
      ++res.evaluations;
      for (std::size_t i = 0; i < dim; ++i) {
        Real c = fx[i] * weight;
        acc.mass[i] += abs(c);
        acc.sum[i] += c;
      }
    }
    if (u.is_zero()) return;
    {
      QuadNode nd{aw + dd, dd, far};
      f(nd, fx);
      ++res.evaluations;
      for (std::size_t i = 0; i < dim; ++i) {
        Real c = fx[i] * weight;
        acc.mass[i] += abs(c);
        acc.sum[i] += c;
      }
    }
  };

  // level 0: unit step
  long kmax = static_cast<long>(std::ceil(u_max));
  for (long k = 0; k <= kmax; ++k) add_node(Real(k, w));

  std::vector<Real> prev(dim, Real(0, w)), prev_diff(dim, Real(1, w));
  for (std::size_t i = 0; i < dim; ++i) prev[i] = acc.sum[i];
  const Real tol = cfg.tolerance();
  int last = fixed_level >= 0 ? fixed_level : kMaxLevel;
  for (int level = 1; level <= last; ++level) {
    Real h = ldexp(Real(1, w), -level);
    long n_odd = static_cast<long>(std::ceil(u_max * std::ldexp(1.0, level)));
    for (long k = 1; k <= n_odd; k += 2) add_node(h * k);
    std::vector<Real> cur(dim, Real(0, w));
    Real worst(0, w);
    bool ok = true;
    for (std::size_t i = 0; i < dim; ++i) {
      cur[i] = acc.sum[i] * h;
      Real mass = acc.mass[i] * h;
      if (!mass.is_zero()) {
        Real d = abs(cur[i] - prev[i]) / mass;
        Real e = d;
        // Only trusted once the differences are shrinking.
        if (stop == QuadStop::extrapolated && level > kMinLevel && d < prev_diff[i]) e = d * prev_diff[i];
        prev_diff[i] = d;
        if (e > worst) worst = e;
        if (e > tol) ok = false;
      }
    }
    prev = std::move(cur);
    res.level = level;
    res.error_estimate = worst;
    if (fixed_level < 0 && level >= kMinLevel && ok) break;
    if (fixed_level < 0 && level == kMaxLevel)
      throw NumericError(Failure::non_convergence,
                         "tanh-sinh did not reach " + std::to_string(cfg.target_digits) +
                             " digits by level " + std::to_string(kMaxLevel) +
                             " (last difference " + to_decimal(worst, 3) + ")");
  }
  res.values.reserve(dim);
  for (auto& v : prev) res.values.push_back(v.with_prec(cfg.bits));
  res.error_estimate = res.error_estimate.with_prec(cfg.bits);
  return res;
}

Real integrate(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
               const PrecisionConfig& cfg) {
  auto vf = [&](const QuadNode& nd, std::vector<Real>& out) { out[0] = f(nd.x); };
  return integrate_vector(vf, 1, a, b, cfg).values[0];
}

}  // namespace hankelpv
