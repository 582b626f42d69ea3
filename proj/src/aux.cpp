#include "hankelpv/aux.hpp"

#include <string>

#include "hankelpv/quadrature.hpp"
#include "hankelpv/special.hpp"

namespace hankelpv {

namespace {

long parity(int n) { return n % 2 == 0 ? 1 : -1; }

void check_pole(const Real& z) {
  if (z.is_zero() || abs(z) == 1)
    throw NumericError(Failure::pole, "ladder coefficient pole at z=" + to_decimal(z, 10));
}

}  // namespace

const char* route_name(Route r) { return r == Route::identity ? "identity" : "quadrature"; }

Real aux_r(int n, const RecurrenceTable& table) {
  if (n < 0 || n > table.n_max) throw UsageError("aux_r index outside the recurrence table");
  const Real& t = table.params.t;
  const Bits b = table.h[0].prec();
  Real a2 = table.params.alpha.with_prec(b) * 2;
  Real r = (a2 + (2 * n + 1)) * table.beta[n] - 2 * table.p1[n] - n;
  if (n % 2 == 1) r += 2 * t;
  return r;
}

Real aux_R(int n, const AuxTable& aux) { return aux.r[n + 1] + aux.r[n]; }

Real sigma(int n, const AuxTable& aux) {
  Real s(0, aux.r[0].prec());
  for (int j = 0; j < n; ++j) s -= aux.R[j];
  return s;
}

AuxTable build_aux(const RecurrenceTable& table) {
  AuxTable aux;
  aux.params = table.params;
  aux.route = Route::identity;
  aux.n_max = table.n_max - 1;
  for (int n = 0; n <= table.n_max; ++n) aux.r.push_back(aux_r(n, table));
  for (int n = 0; n <= aux.n_max; ++n) aux.R.push_back(aux_R(n, aux));
  for (int n = 0; n <= aux.n_max + 1; ++n) aux.sigma.push_back(sigma(n, aux));
  return aux;
}

AuxTable build_aux_oracle(const RecurrenceTable& table, const PrecisionConfig& cfg) {
  const WeightParams& p = table.params;
  const int N = table.n_max;
  const Bits b = cfg.bits;
  AuxTable aux;
  aux.params = p;
  aux.route = Route::quadrature;
  aux.n_max = N - 1;
  if (p.t.is_zero()) {
    aux.r.assign(N + 1, Real(0, b));
    aux.R.assign(N, Real(0, b));
    aux.sigma.assign(N + 1, Real(0, b));
    return aux;
  }
  // components: int_0^1 P_n^2 w / y^2 (n = 0..N-1), int_0^1 P_n P_{n-1} w / y^3 (n = 1..N)
  auto f = [&](const QuadNode& nd, std::vector<Real>& out) {
    Real w = weight_at(nd.x, nd.from_b, p);
    if (w.is_zero()) {
      for (auto& o : out) o = Real(0, b);
      return;
    }
    auto P = eval_polys(N, nd.x, table);
    Real y2 = square(nd.x);
    Real w2 = w / y2, w3 = w2 / nd.x;
    for (int n = 0; n < N; ++n) out[n] = square(P[n].value) * w2;
    for (int n = 1; n <= N; ++n) out[N + n - 1] = P[n].value * P[n - 1].value * w3;
  };
  auto res = integrate_vector(f, 2 * N, Real(0, b), Real(1, b), cfg);
  Real t4 = p.t.with_prec(b) * 4;  // 2t times the even-integrand factor 2
  aux.r.push_back(Real(0, b));
  for (int n = 1; n <= N; ++n) aux.r.push_back(t4 * res.values[N + n - 1] / table.h[n - 1]);
  for (int n = 0; n < N; ++n) aux.R.push_back(t4 * res.values[n] / table.h[n]);
  for (int n = 0; n <= N; ++n) aux.sigma.push_back(sigma(n, aux));
  return aux;
}

Real aux_R_oracle(int n, const WeightParams& p, const PrecisionConfig& cfg) {
  auto tab = recurrence_table(n + 1, p, cfg);
  return build_aux_oracle(tab, cfg).R[n];
}

Real aux_r_oracle(int n, const WeightParams& p, const PrecisionConfig& cfg) {
  auto tab = recurrence_table(std::max(n, 1), p, cfg);
  return build_aux_oracle(tab, cfg).r[n];
}

Real r1_closed(const WeightParams& p) {
  const Bits b = std::max(p.alpha.prec(), p.t.prec());
  const Real a = p.alpha.with_prec(b), t = p.t.with_prec(b), st = sqrt(t), mt = -t;
  const Real h = Real::from_rational(1, 2, b);
  Real g1 = gamma(a + 1), g32 = gamma(a + 1 + h);
  Real num = g32 * kummer_phi(-a, h, mt) - (2 * a + 1) * st * g1 * kummer_phi(h - a, 3 * h, mt);
  Real den = g1 * kummer_phi(-h - a, h, mt) - 2 * st * g32 * kummer_phi(-a, 3 * h, mt);
  return 2 * st * num / den;
}

Real R1_closed(const WeightParams& p) {
  const Bits b = std::max(p.alpha.prec(), p.t.prec());
  const Real a = p.alpha.with_prec(b), t = p.t.with_prec(b), st = sqrt(t), mt = -t;
  const Real h = Real::from_rational(1, 2, b);
  Real g1 = gamma(a + 1), g52 = gamma(a + 5 * h);
  Real num = (2 * a + 3) * g1 * kummer_phi(-h - a, h, mt) - 4 * st * g52 * kummer_phi(-a, 3 * h, mt);
  Real den = 3 * g1 * kummer_phi(-3 * h - a, -h, mt) + 8 * t * st * g52 * kummer_phi(-a, 5 * h, mt);
  return 6 * t * num / den;
}

Real beta_via_aux(int n, const Real& R_n, const Real& r_n, const WeightParams& p) {
  const Bits b = std::max(R_n.prec(), r_n.prec());
  const Real a2 = p.alpha.with_prec(b) * 2, t = p.t.with_prec(b);
  Real nr = r_n + n;
  Real d1 = (a2 + (2 * n - 1)) * (a2 + (2 * n + 1) + R_n);
  Real d2 = (a2 + (2 * n - 1)) * R_n;
  if (d1.is_zero() || d2.is_zero())
    throw NumericError(Failure::pole, "beta_via_aux: vanishing denominator at n=" + std::to_string(n));
  return (square(nr) + a2 * nr) / d1 + 2 * parity(n) * t * r_n / d2;
}

Real beta_via_sigma(int n, const Real& r_n, const Real& sigma_n, const WeightParams& p) {
  const Bits b = std::max(r_n.prec(), sigma_n.prec());
  const Real a = p.alpha.with_prec(b), t = p.t.with_prec(b);
  Real num = (a * 2 + n) * n + 2 * (a + n) * r_n + sigma_n + 2 * t * ((a + n) * parity(n) - a);
  Real den = (2 * a + (2 * n + 1)) * (2 * a + (2 * n - 1));
  if (den.is_zero()) throw NumericError(Failure::pole, "beta_via_sigma: vanishing denominator");
  return num / den;
}

Real v_prime(const Real& z, const WeightParams& p) {
  check_pole(z);
  return -2 * p.t / pow(z, 3) + 2 * p.alpha * z / (1 - square(z));
}

Real v_double_prime(const Real& z, const WeightParams& p) {
  check_pole(z);
  Real z2 = square(z);
  return 6 * p.t / square(z2) + 2 * p.alpha * (1 + z2) / square(1 - z2);
}

LadderValues eval_ladder(int n, const Real& z, const Real& R_n, const Real& r_n,
                         const WeightParams& p) {
  check_pole(z);
  const Bits b = std::max({z.prec(), R_n.prec(), r_n.prec()});
  const Real a2 = p.alpha.with_prec(b) * 2, t = p.t.with_prec(b);
  Real z2 = square(z), om = 1 - z2;
  Real N = a2 + (2 * n + 1) + R_n;
  Real c = n % 2 == 1 ? 2 * t : Real(0, b);
  LadderValues v;
  v.A = R_n / z2 + N / om;
  v.B = c / pow(z, 3) + r_n / z + z * (r_n + n) / om;
  v.dA = -2 * R_n / pow(z, 3) + 2 * z * N / square(om);
  v.dB = -3 * c / square(z2) - r_n / z2 + (r_n + n) * (1 + z2) / square(om);
  return v;
}

namespace {

// (1/h) int_{-1}^{1} kernel * Q(y) w(y) dy folded onto [0,1]; `even_part`
// selects K(z,y)+K(z,-y) (for even Q) or K(z,y)-K(z,-y) (odd Q).
Real ladder_oracle(int n, const Real& z, const RecurrenceTable& table, const PrecisionConfig& cfg,
                   bool a_coefficient) {
  check_pole(z);
  const WeightParams& p = table.params;
  const Bits b = cfg.bits;
  const Real zz = z.with_prec(b), t = p.t.with_prec(b), al = p.alpha.with_prec(b);
  const Real z2 = square(zz), om = 1 - z2;
  auto f = [&](const QuadNode& nd, std::vector<Real>& out) {
    const Real& y = nd.x;
    Real w = weight_at(y, nd.from_b, p);
    if (w.is_zero() || y.is_zero()) {
      out[0] = Real(0, b);
      return;
    }
    auto P = eval_polys(n, y, table);
    Real y2 = square(y);
    Real one_m_y2 = nd.from_b * (1 + y);
    if (a_coefficient) {
      Real k = 4 * t / (z2 * y2) + 4 * al / (om * one_m_y2);
      out[0] = k * square(P[n].value) * w;
    } else {
      Real k = 4 * t * (z2 + y2) / (pow(zz, 3) * pow(y, 3)) + 4 * al * zz * y / (om * one_m_y2);
      out[0] = k * P[n].value * P[n - 1].value * w;
    }
  };
  Real I = integrate_vector(f, 1, Real(0, b), Real(1, b), cfg).values[0];
  return a_coefficient ? I / table.h[n] : I / table.h[n - 1];
}

}  // namespace

Real ladder_A_oracle(int n, const Real& z, const RecurrenceTable& table, const PrecisionConfig& cfg) {
  return ladder_oracle(n, z, table, cfg, true);
}

Real ladder_B_oracle(int n, const Real& z, const RecurrenceTable& table, const PrecisionConfig& cfg) {
  if (n < 1) throw UsageError("B_n oracle needs n >= 1");
  return ladder_oracle(n, z, table, cfg, false);
}

}  // namespace hankelpv
