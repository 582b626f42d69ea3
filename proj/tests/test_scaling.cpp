#include <doctest.h>

#include "hankelpv/scaling.hpp"

using namespace hankelpv;

namespace {

const PrecisionConfig kCfg;

Real dec(const char* s) { return Real::from_string(s, kCfg.bits); }

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("0.25") == mpq_class(1, 4));
  CHECK(parse_rational("-2.5e-3") == mpq_class(-1, 400));
  CHECK(parse_rational("1/2") == mpq_class(1, 2));
  CHECK(parse_rational("3") == 3);
  CHECK_THROWS_AS(parse_rational("abc"), UsageError);
  CHECK_THROWS_AS(parse_series_kind("g3-small"), UsageError);
  CHECK_THROWS_AS(parse_scan_mode("g3"), UsageError);
}

TEST_CASE("printed coefficients are the formal power-series solution") {
  struct Case {
    SeriesKind kind;
    mpq_class a;
  };
  const Case cases[] = {{SeriesKind::g1_small, 0},          {SeriesKind::g2_small, 0},
                        {SeriesKind::g1_large, 0},          {SeriesKind::g2_large, 0},
                        {SeriesKind::delta_small, 0},       {SeriesKind::delta_large, 0},
                        {SeriesKind::g_small, mpq_class(3, 10)},
                        {SeriesKind::delta_ab_small, mpq_class(5, 2)},
                        {SeriesKind::g_large, mpq_class(1, 2)}};
  for (const auto& c : cases) {
    auto p = printed_series(c.kind, c.a, kCfg.bits);
    auto d = derived_series(c.kind, c.a, 24, kCfg.bits);
    REQUIRE(d.terms.size() >= p.terms.size());
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
      CHECK_MESSAGE(p.terms[i].exponent == d.terms[i].exponent, series_kind_name(c.kind) << " term " << i);
      CHECK_MESSAGE(p.terms[i].coefficient == d.terms[i].coefficient, series_kind_name(c.kind) << " term " << i);
    }
    CHECK(p.has_first_omitted);
  }
}

TEST_CASE("small-s recursion starts at g = s/(2a)") {
  auto d = derived_series(SeriesKind::g_small, mpq_class(3, 10), 4, kCfg.bits);
  CHECK(d.terms[0].exponent == 1);
  CHECK(d.terms[0].coefficient == mpq_class(5, 3));
  CHECK_THROWS_AS(printed_series(SeriesKind::g_small, 1, kCfg.bits), UsageError);
}

TEST_CASE("series evaluation") {
  auto v = series_eval(SeriesKind::g1_small, dec("0.1"), kCfg.bits);
  CHECK(abs(v.value - dec("-0.3081157844")) < dec("1e-9"));
  CHECK(v.in_regime);
  CHECK(v.truncation_estimate > 0);
  CHECK(series_eval(SeriesKind::g1_small, dec("0"), kCfg.bits).value.is_zero());
  // 2 s^{2/3} + s^{1/3}/3 + ... at s = 10^3.
  auto w = series_eval(SeriesKind::g1_large, dec("1000"), kCfg.bits);
  CHECK(abs(w.value - dec("203.33424679")) < dec("1e-8"));
  CHECK(w.truncation_estimate < dec("1e-7"));
}

TEST_CASE("Barnes constants reproduce the Dyson constant") {
  Real sum = barnes_constant(mpq_class(1, 2), kCfg.bits) + barnes_constant(mpq_class(-1, 2), kCfg.bits);
  CHECK(abs(sum - dyson_constant(kCfg.bits)) < pow10(100, kCfg.bits));
  CHECK(abs(dyson_constant(kCfg.bits) - dec("-0.43850116605469067852")) < dec("1e-19"));
  CHECK(barnes_constant(0, kCfg.bits).is_zero());
  Real c1 = barnes_constant(1, kCfg.bits) + log(2 * Real::pi(kCfg.bits)) / 2;
  CHECK(abs(c1) < pow10(100, kCfg.bits));
}

TEST_CASE("III' integration agrees with the small-s series") {
  PrecisionConfig cfg;
  cfg.bits = 256;
  cfg.target_digits = 40;
  const mpq_class a(3, 10);
  PiiiOptions opt;
  opt.sample_points = {Real::from_string("0.03", cfg.bits)};
  auto tr = solve_piii_prime(a, Real::from_string("0.05", cfg.bits), cfg, opt);
  REQUIRE_FALSE(tr.halted);
  auto e = derived_series(SeriesKind::g_small, a, 60, cfg.bits);
  for (const auto& pt : {tr.samples.front(), tr.end}) {
    auto v = series_eval(e, pt.s);
    CHECK(abs(pt.g - v.value) / abs(v.value) < Real::from_string("1e-30", cfg.bits));
  }
  auto ld = series_eval(derived_series(SeriesKind::delta_ab_small, a, 60, cfg.bits), tr.end.s);
  CHECK(abs(tr.end.logDelta - ld.value) / abs(ld.value) < Real::from_string("1e-30", cfg.bits));
}

TEST_CASE("Painleve V continuation reproduces the finite-n R_n") {
  auto tr = continue_pv(1, dec("1"), dec("0.2"), dec("0.4"), kCfg, 3);
  REQUIRE_FALSE(tr.halted);
  CHECK(tr.samples.size() == 4);
  CHECK(tr.endpoint_error < pow10(40, kCfg.bits));
  CHECK(tr.max_pv_residual < pow10(25, kCfg.bits));
  auto id = continue_pv(2, dec("1"), dec("0.3"), dec("0.3"), kCfg, 2);
  CHECK(id.endpoint_error < pow10(50, kCfg.bits));
  CHECK_THROWS_AS(continue_pv(-1, dec("1"), dec("0.2"), dec("0.4"), kCfg), UsageError);
}

TEST_CASE("Richardson extrapolation is exact on polynomials in 1/n") {
  std::vector<int> n{4, 8, 16, 32};
  std::vector<Real> v, w;
  for (int k : n) {
    Real x = Real(1, kCfg.bits) / k;
    v.push_back(3 + x + 2 * x * x - x * x * x);
    w.push_back(3 + 5 * x * x);
  }
  CHECK(abs(extrapolate(n, v, false) - 3) < pow10(100, kCfg.bits));
  CHECK(abs(extrapolate(n, w, true) - 3) < pow10(100, kCfg.bits));
}

TEST_CASE("sigma-form residual of a constant is trivially zero") {
  auto rows = sigma_form_residual(
      [](const Real& s) {
        Real z(0, kCfg.bits), e = pow10(20, kCfg.bits);
        return SigmaSample{s, Real(2, kCfg.bits), z, z, e, e, e};
      },
      {dec("0.02"), dec("0.05")});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.trivially_true);
    CHECK(r.residual.is_zero());
    CHECK(r.below_error_bar);
  }
}

TEST_CASE("double-scaling scan plumbing") {
  auto r = double_scaling_scan(dec("0.2"), {4, 8}, dec("1"), ScanMode::g1, kCfg);
  CHECK(r.raw.size() == 2);
  CHECK(r.extrapolated.is_finite());
  CHECK(r.error_bar > 0);
  CHECK(r.reference_name == "g1-small");
  CHECK(std::string(scan_mode_name(parse_scan_mode("sigma-n4"))) == "sigma-n4");
  CHECK_THROWS_AS(double_scaling_scan(dec("0.2"), {8, 4}, dec("1"), ScanMode::g1, kCfg), UsageError);
}
