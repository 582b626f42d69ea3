#include <cmath>

#include "doctest.h"
#include "hankelpv/differentiate.hpp"
#include "hankelpv/ode.hpp"
#include "hankelpv/quadrature.hpp"
#include "hankelpv/special.hpp"

using namespace hankelpv;

namespace {

constexpr Bits kBits = 512;

Real R(const char* s) { return Real::from_string(s, kBits); }
Real Q(long p, long q) { return Real::from_rational(p, q, kBits); }

// |a - b| <= 10^-digits * max(1, |b|)
bool close(const Real& a, const Real& b, int digits) {
  Real scale = max(abs(b), Real(1, kBits));
  return abs(a - b) <= scale * pow10(digits, kBits);
}

}  // namespace

TEST_CASE("real arithmetic keeps the wider precision") {
  Real a(3, 256), b(7, 512);
  CHECK((a / b).prec() == 512);
  CHECK((a * 2).prec() == 256);
  Real c = a;
  c += b;
  CHECK(c.prec() == 512);
  CHECK(c == 10);
}

TEST_CASE("decimal strings round-trip at target digits") {
  Real x = Real::pi(kBits) / 7;
  std::string s = to_decimal(x, 60);
  Real y = Real::from_string(s, kBits);
  CHECK(to_decimal(y, 60) == s);
  CHECK_THROWS_AS(Real::from_string("1.5x", kBits), std::invalid_argument);
}

TEST_CASE("precision config validation") {
  PrecisionConfig c;
  CHECK_NOTHROW(c.validate());
  c.bits = 64;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c.bits = 128;
  CHECK_THROWS_AS(c.validate(), UsageError);  // 60 digits need more than 128 bits
  c.target_digits = 28;
  CHECK_NOTHROW(c.validate());
  CHECK(PrecisionConfig::max_target_digits(512) == 144);
}

TEST_CASE("gamma") {
  Real g = gamma(Q(1, 2));
  CHECK(close(square(g), Real::pi(kBits), 150));
  CHECK(close(gamma(Real(6, kBits)), Real(120, kBits), 150));
  CHECK_THROWS_AS(gamma(Real(-2, kBits)), NumericError);
  CHECK(close(gamma(Q(-3, 2)), 4 * sqrt(Real::pi(kBits)) / 3, 150));
}

TEST_CASE("kummer phi") {
  // exp(z) when a == b
  CHECK(close(kummer_phi(Q(7, 3), Q(7, 3), Real(-5, kBits)), exp(Real(-5, kBits)), 145));
  // negative half-integer b (as in the moment formula)
  CHECK(close(kummer_phi(Q(-7, 2) - Q(7, 10), Q(-5, 2), Real(-2, kBits)),
              R("-42.669876499331162462625882712775743934890966312592601386177161711"), 60));
  // strong cancellation: terms reach ~1e16 while the sum is ~3e-2
  Real v = kummer_phi(Q(3, 10), Q(1, 3), Real(-40, kBits));
  CHECK(close(v, R("0.030299282122956100283241556474101326699224749084822638399151795298"), 62));
  CHECK(v.prec() == kBits);
  // terminating series: Laguerre-type polynomial 1F1(-2; 1; z) = 1 - 2z + z^2/2
  Real z = Q(3, 7);
  CHECK(close(kummer_phi(Real(-2, kBits), Real(1, kBits), z), 1 - 2 * z + square(z) / 2, 150));
  CHECK_THROWS_AS(kummer_phi(Q(1, 2), Real(-3, kBits), z), NumericError);
}

TEST_CASE("zeta'(-1) and the Glaisher constant") {
  CHECK(close(zeta_prime_minus_one(kBits),
              R("-0.16542114370045092921391966024278064276403638033520178366652230636"), 62));
  CHECK(close(log_glaisher(kBits),
              R("0.24875447703378426254725299357611397609736971366853511699985563969"), 62));
  // at 1024 bits the two precisions agree far beyond 512 bits' reach
  Real hi = zeta_prime_minus_one(1024);
  CHECK(abs(hi.with_prec(kBits) - zeta_prime_minus_one(kBits)) < pow10(150, kBits));
}

TEST_CASE("Barnes G at integers and half-integers") {
  CHECK(close(log_barnes_g(Real(5, kBits)), log(Real(12, kBits)), 150));
  CHECK(close(log_barnes_g(Real(6, kBits)), log(Real(288, kBits)), 150));
  CHECK(close(log_barnes_g(Real(1, kBits)), Real(0, kBits), 150));
  CHECK(close(exp(log_barnes_g(Q(1, 2))),
              R("0.60324428120944620619142922453470207988300342038945976538776920412"), 62));
  CHECK(close(log_barnes_g(Q(7, 2)),
              R("0.23083252127267864156100490976923911617053327264833111385326135202"), 62));
  // G(x + 1) = Gamma(x) G(x)
  Real x = Q(11, 2);
  CHECK(close(log_barnes_g(x + 1), log_barnes_g(x) + log_gamma(x), 140));
  CHECK_THROWS_AS(log_barnes_g(Q(1, 3)), UsageError);
}

TEST_CASE("tanh-sinh quadrature") {
  PrecisionConfig cfg;
  // endpoint singularity
  Real v = integrate([](const Real& x) { return 1 / sqrt(x); }, Real(0, kBits), Real(1, kBits), cfg);
  CHECK(close(v, Real(2, kBits), 60));
  // essential singularity of the weight at the origin
  Real t = Q(1, 4);
  Real w = integrate([&](const Real& x) { return exp(-t / square(x)); }, Real(0, kBits),
                     Real(1, kBits), cfg);
  CHECK(close(w, R("0.35385486403143930335178946204820115898175665132923905681488603728"), 60));
  // vector integrand and endpoint distances
  auto f = [](const QuadNode& nd, std::vector<Real>& out) {
    out[0] = pow(nd.from_b, Real::from_rational(-3, 10, nd.x.prec()));  // (1-x)^-0.3
    out[1] = nd.x * nd.x;
  };
  auto r = integrate_vector(f, 2, Real(0, kBits), Real(1, kBits), cfg);
  CHECK(close(r.values[0], Q(10, 7), 60));
  CHECK(close(r.values[1], Q(1, 3), 60));
  // a fixed-level rule reproduces the adaptive result at the same level
  auto g = integrate_vector(f, 2, Real(0, kBits), Real(1, kBits), cfg, r.level);
  CHECK(g.values[1] == r.values[1]);
}

TEST_CASE("Richardson derivatives") {
  PrecisionConfig cfg;
  Real x = Q(3, 2);
  auto e = derivative([](const Real& y) { return exp(y); }, x, 1, cfg);
  CHECK(close(e.value, exp(x), 100));
  auto l2 = derivative([](const Real& y) { return log(y); }, x, 2, cfg);
  CHECK(close(l2.value, -1 / square(x), 70));
  auto l3 = derivative([](const Real& y) { return log(y); }, x, 3, cfg);
  CHECK(close(l3.value, 2 / pow(x, 3), 60));
  auto jets = differentiate(
      [](const Real& y) { return std::vector<Real>{exp(y), y * y * y}; }, x, 2, cfg);
  CHECK(close(jets[1].d[2], 6 * x, 70));
  CHECK(close(jets[0].d[1], exp(x), 100));
}

namespace {

Real ode_error(const Real& tol, const PrecisionConfig& cfg) {
  OdeProblem p;
  p.dimension = 1;
  p.rhs = [](const Real& x, const std::vector<Real>& y, std::vector<Real>& dy) { dy[0] = -2 * x * y[0]; };
  p.x0 = Real(0, cfg.bits);
  p.y0 = {Real(1, cfg.bits)};
  p.x_end = Real(3, cfg.bits);
  p.tolerance = tol;
  auto tr = solve_ode(p, cfg);
  return abs(tr.end.y[0] - exp(Real(-9, cfg.bits)));
}

}  // namespace

TEST_CASE("extrapolation ODE solver") {
  PrecisionConfig cfg;
  OdeProblem p;
  p.dimension = 2;
  // y'' = y, y(0)=1, y'(0)=1 -> e^x; samples land exactly on requested points
  p.rhs = [](const Real&, const std::vector<Real>& y, std::vector<Real>& dy) {
    dy[0] = y[1];
    dy[1] = y[0];
  };
  p.x0 = Real(0, kBits);
  p.y0 = {Real(1, kBits), Real(1, kBits)};
  p.x_end = Real(2, kBits);
  p.tolerance = pow10(55, kBits);
  p.sample_points = {Q(1, 2), Real(1, kBits)};
  auto tr = solve_ode(p, cfg);
  REQUIRE(tr.samples.size() == 2);
  CHECK(tr.samples[1].x == 1);
  CHECK(close(tr.samples[1].y[0], exp(Real(1, kBits)), 52));
  CHECK(close(tr.end.y[1], exp(Real(2, kBits)), 52));

  // tightening the tolerance from 1e-20 to 1e-40 cuts the achieved error
  Real e20 = ode_error(pow10(20, kBits), cfg);
  Real e40 = ode_error(pow10(40, kBits), cfg);
  CHECK(e20 < pow10(18, kBits));
  CHECK(e40 * 10 < e20);

  // backward integration
  p.x0 = Real(1, kBits);
  p.y0 = {exp(Real(1, kBits)), exp(Real(1, kBits))};
  p.x_end = Real(0, kBits);
  p.sample_points.clear();
  auto back = solve_ode(p, cfg);
  CHECK(close(back.end.y[0], Real(1, kBits), 52));

  // guard halts with the last valid state
  p.x0 = Real(0, kBits);
  p.y0 = {Real(1, kBits), Real(1, kBits)};
  p.x_end = Real(2, kBits);
  p.guard = [](const Real&, const std::vector<Real>& y) -> std::optional<std::string> {
    if (y[0] > 3) return std::string("y too large");
    return std::nullopt;
  };
  try {
    solve_ode(p, cfg);
    FAIL("expected halt");
  } catch (const OdeHalt& h) {
    CHECK(h.kind() == Failure::ode_guard);
    CHECK(h.last().y[0] <= 3);
    CHECK(h.last().x > 0);
  }
}
