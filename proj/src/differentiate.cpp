#include "hankelpv/differentiate.hpp"

#include <map>
#include <string>

namespace hankelpv {

namespace {

constexpr int kLevels = 4;

// Richardson table on estimates D(h/2^k) whose error is even in h.
void richardson(std::vector<Real> est, Real* value, Real* err) {
  const int n = static_cast<int>(est.size());
  Real diff_last;
  for (int m = 1; m < n; ++m) {
    Real f = Real(1, est[0].prec());
    f = ldexp(f, 2 * m) - 1;
    for (int k = n - 1; k >= m; --k) est[k] = est[k] + (est[k] - est[k - 1]) / f;
    if (m == n - 1) diff_last = est[n - 1] - est[n - 2];
  }
  *value = est[n - 1];
  *err = abs(diff_last);
}

}  // namespace

std::vector<Jet> differentiate(const std::function<std::vector<Real>(const Real&)>& f,
                               const Real& x, int max_order, const PrecisionConfig& cfg) {
  if (max_order < 0 || max_order > 3) throw UsageError("derivative order must be 0..3");
  const Bits bits = cfg.bits;
  const Real xr = x.with_prec(bits);
  // Cache evaluations by offset index: key = (base, signed multiple of h_min).
  std::map<std::pair<int, long>, std::vector<Real>> cache;
  auto at = [&](int base, Real step, long mult) -> const std::vector<Real>& {
    auto key = std::make_pair(base, mult);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Real arg = mult == 0 ? xr : xr + step * mult;
    return cache.emplace(key, f(arg)).first->second;
  };

  const std::vector<Real>& f0 = at(0, Real(0, bits), 0);
  const std::size_t dim = f0.size();
  std::vector<Jet> jets(dim);
  for (std::size_t i = 0; i < dim; ++i) jets[i].value = f0[i];
  if (max_order == 0) return jets;

  // Stencil for orders 1, 2: h_k = h0 / 2^k = h_min * 2^(K-1-k).
  const long e12 = static_cast<long>(bits) / 4;
  const Real hmin = ldexp(Real(1, bits), -e12 - (kLevels - 1));
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<Real> d1, d2;
    for (int k = 0; k < kLevels; ++k) {
      long m = 1L << (kLevels - 1 - k);
      Real hk = hmin * m;
      const Real& fp = at(1, hmin, m)[i];
      const Real& fm = at(1, hmin, -m)[i];
      Real xp = xr + hk, xm = xr - hk;
      Real span = xp - xm;
      d1.push_back((fp - fm) / span);
      if (max_order >= 2) d2.push_back((fp - 2 * f0[i] + fm) * 4 / square(span));
    }
    richardson(d1, &jets[i].d[1], &jets[i].err[1]);
    if (max_order >= 2) richardson(d2, &jets[i].d[2], &jets[i].err[2]);
  }
  if (max_order >= 3) {
    const long e3 = static_cast<long>(bits) / 6;
    const Real Hmin = ldexp(Real(1, bits), -e3 - (kLevels - 1));
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<Real> d3;
      for (int k = 0; k < kLevels; ++k) {
        long m = 1L << (kLevels - 1 - k);
        Real Hk = Hmin * m;
        const Real& f1p = at(3, Hmin, m)[i];
        const Real& f1m = at(3, Hmin, -m)[i];
        const Real& f2p = at(3, Hmin, 2 * m)[i];
        const Real& f2m = at(3, Hmin, -2 * m)[i];
        d3.push_back((f2p - 2 * f1p + 2 * f1m - f2m) / (2 * pow(Hk, 3)));
      }
      richardson(d3, &jets[i].d[3], &jets[i].err[3]);
    }
  }
  return jets;
}

DerivativeResult derivative(const std::function<Real(const Real&)>& f, const Real& x, int order,
                            const PrecisionConfig& cfg) {
  if (order < 1 || order > 3) throw UsageError("derivative order must be 1, 2 or 3");
  auto vf = [&](const Real& y) { return std::vector<Real>{f(y)}; };
  auto jets = differentiate(vf, x, order, cfg);
  DerivativeResult r{jets[0].d[order], jets[0].err[order]};
  if (!r.value.is_finite() || !r.error_estimate.is_finite())
    throw NumericError(Failure::derivative_unstable, "non-finite derivative estimate");
  Real scale = max(abs(r.value), Real(1, cfg.bits));
  if (r.error_estimate > scale * pow10(3, cfg.bits))
    throw NumericError(Failure::derivative_unstable,
                       "Richardson table diverged (error " + to_decimal(r.error_estimate, 3) + ")");
  return r;
}

}  // namespace hankelpv
