#include "doctest.h"
#include "hankelpv/aux.hpp"
#include "hankelpv/differentiate.hpp"

using namespace hankelpv;

namespace {

constexpr Bits kBits = 512;

Real Q(long p, long q) { return Real::from_rational(p, q, kBits); }

bool close(const Real& a, const Real& b, int digits) {
  Real scale = max(max(abs(a), abs(b)), Real(1, kBits));
  return abs(a - b) <= scale * pow10(digits, kBits);
}

}  // namespace

TEST_CASE("identity-route r_n and R_n: initial conditions") {
  PrecisionConfig cfg;
  WeightParams p{Q(1, 1), Q(3, 10)};
  auto tab = recurrence_table(6, p, cfg);
  auto aux = build_aux(tab);
  CHECK(aux.r[0].is_zero());
  CHECK(close(aux.r[1], r1_closed(p), 60));
  CHECK(close(aux.R[0], r1_closed(p), 60));
  CHECK(close(aux.R[1], R1_closed(p), 60));
  CHECK(aux.sigma[0].is_zero());
  CHECK(aux.sigma[1] == -aux.R[0]);
}

TEST_CASE("r_n vanishes at t = 0") {
  PrecisionConfig cfg;
  auto tab = recurrence_table(11, {Q(7, 10), Q(0, 1)}, cfg);
  auto aux = build_aux(tab);
  for (int n = 0; n <= 10; ++n) {
    CHECK(abs(aux.r[n]) < pow10(120, kBits));
    CHECK(abs(aux.R[n]) < pow10(120, kBits));
  }
}

TEST_CASE("quadrature oracles") {
  PrecisionConfig cfg;
  WeightParams p{Q(1, 1), Q(3, 10)};
  CHECK(close(aux_R_oracle(0, p, cfg), r1_closed(p), 58));
  CHECK(aux_r_oracle(0, p, cfg).is_zero());
  WeightParams q{Q(1, 1), Q(1, 2)};
  auto tab = recurrence_table(5, q, cfg);
  CHECK(close(aux_R_oracle(3, q, cfg), build_aux(tab).R[3], 50));
}

TEST_CASE("identity and quadrature routes agree across the grid") {
  PrecisionConfig cfg;
  const Real thr = cfg.residual_threshold();
  for (auto a : {Q(7, 10), Q(1, 1), Q(23, 10)}) {
    for (auto t : {Q(1, 20), Q(1, 2), Q(2, 1)}) {
      WeightParams p{a, t};
      auto tab = recurrence_table(14, p, cfg);
      auto id = build_aux(tab);
      auto qu = build_aux_oracle(tab, cfg);
      for (int n = 0; n <= 12; ++n) {
        INFO("alpha=" << a << " t=" << t << " n=" << n);
        CHECK(abs(id.r[n] - qu.r[n]) <= thr * max(abs(qu.r[n]), Real(1, kBits)));
        CHECK(abs(id.R[n] - qu.R[n]) <= thr * max(abs(qu.R[n]), Real(1, kBits)));
        // (s1) with quadrature values on both sides
        CHECK(abs(qu.R[n] - qu.r[n + 1] - qu.r[n]) <= thr * abs(qu.R[n]));
        // observed sign of R_n for t > 0 (positive: R_n = (2t/h_n) int P_n^2 w / y^2)
        CHECK(qu.R[n] > 0);
      }
    }
  }
}

TEST_CASE("sigma_n equals 2t d/dt ln D_n") {
  PrecisionConfig cfg;
  WeightParams p{Q(23, 10), Q(1, 2)};
  auto tab = recurrence_table(9, p, cfg);
  auto aux = build_aux(tab);
  for (int n : {1, 4, 9}) {
    auto d = derivative(
        [&](const Real& t) { return recurrence_table(9, {p.alpha, t}, cfg).log_d[n]; }, p.t, 1, cfg);
    CHECK(close(aux.sigma[n], 2 * p.t * d.value, 30));
  }
}

TEST_CASE("beta from auxiliary quantities") {
  PrecisionConfig cfg;
  WeightParams p{Q(1, 1), Q(1, 2)};
  CHECK(beta_via_sigma(0, Real(0, kBits), Real(0, kBits), p).is_zero());
  auto tab = recurrence_table(6, p, cfg);
  auto aux = build_aux(tab);
  CHECK(close(beta_via_aux(4, aux.R[4], aux.r[4], p), tab.beta[4], 30));
  CHECK(close(beta_via_sigma(4, aux.r[4], aux.sigma[4], p), tab.beta[4], 30));
}

TEST_CASE("ladder coefficients") {
  PrecisionConfig cfg;
  WeightParams p{Q(1, 1), Q(1, 2)};
  auto tab = recurrence_table(10, p, cfg);
  auto aux = build_aux_oracle(tab, cfg);
  Real z = Q(37, 100);
  auto L = eval_ladder(2, z, aux.R[2], aux.r[2], p);
  CHECK(close(ladder_A_oracle(2, z, tab, cfg), L.A, 30));
  auto L3 = eval_ladder(3, z, aux.R[3], aux.r[3], p);
  CHECK(close(ladder_B_oracle(3, z, tab, cfg), L3.B, 30));
  CHECK(eval_ladder(2, -z, aux.R[2], aux.r[2], p).A == L.A);
  // even n: no z^-3 pole in B_n
  Real tiny = pow10(40, kBits);
  CHECK(abs(eval_ladder(4, tiny, aux.R[4], aux.r[4], p).B * pow(tiny, 3)) < pow10(70, kBits));
  CHECK(abs(eval_ladder(5, tiny, aux.R[5], aux.r[5], p).B * pow(tiny, 3) - 2 * p.t) < pow10(70, kBits));
  CHECK_THROWS_AS(eval_ladder(2, Real(1, kBits), aux.R[2], aux.r[2], p), NumericError);
  // lowering and raising operators at three points
  for (auto zz : {Q(1, 5), Q(37, 100), Q(4, 5)}) {
    auto P = eval_polys(9, zz, tab);
    for (int n = 1; n <= 8; ++n) {
      auto Ln = eval_ladder(n, zz, aux.R[n], aux.r[n], p);
      auto Lm = eval_ladder(n - 1, zz, aux.R[n - 1], aux.r[n - 1], p);
      Real low = P[n].d1 + Ln.B * P[n].value - tab.beta[n] * Ln.A * P[n - 1].value;
      Real scale = abs(P[n].d1) + abs(Ln.B * P[n].value) + abs(tab.beta[n] * Ln.A * P[n - 1].value);
      CHECK(abs(low) <= scale * cfg.residual_threshold());
      Real vp = v_prime(zz, p);
      Real up = P[n - 1].d1 - (Ln.B + vp) * P[n - 1].value + Lm.A * P[n].value;
      Real scale2 = abs(P[n - 1].d1) + abs((Ln.B + vp) * P[n - 1].value) + abs(Lm.A * P[n].value);
      CHECK(abs(up) <= scale2 * cfg.residual_threshold());
    }
  }
}
