#include <doctest.h>

#include "hankelpv/bridge.hpp"

using namespace hankelpv;

namespace {

const PrecisionConfig kCfg;

const VerificationRow& find(const std::vector<VerificationRow>& rows, const std::string& id, int n) {
  for (const auto& r : rows)
    if (r.identity == id && r.n == n) return r;
  FAIL("no row " << id << " n=" << n);
  return rows.front();
}

Real dec(const char* s) { return Real::from_string(s, kCfg.bits); }

}  // namespace

TEST_CASE("tilde moments at a = -1/2 are the even main moments") {
  const Real half = Real::from_rational(1, 2, kCfg.bits);
  WeightParams p{dec("1"), dec("0.5")};
  auto mu = tilde_moments(4, {-half, p.alpha, p.t}, kCfg);
  auto main = moments(8, p, kCfg);
  for (int j = 0; j <= 4; ++j)
    CHECK(abs(mu[j] - main[2 * j]) / main[2 * j] < pow10(50, kCfg.bits));
}

TEST_CASE("tilde moments at t = 0 are Beta integrals") {
  auto mu = tilde_moments(0, {dec("0.5"), dec("1"), dec("0")}, kCfg);
  // B(3/2, 2) = 4/15
  CHECK(abs(mu[0] - Real::from_rational(4, 15, kCfg.bits)) < pow10(50, kCfg.bits));
  CHECK_THROWS_AS(tilde_moments(1, {dec("0.5"), dec("0"), dec("1")}, kCfg), UsageError);
}

TEST_CASE("R* and R~ differ by the constant 2n+1+a+b") {
  auto tab = tilde_moments_and_table(3, {dec("-0.5"), dec("1"), dec("0.5")}, kCfg, false);
  for (int n = 0; n <= 3; ++n) {
    Real c = Real(2 * n + 1, kCfg.bits) + dec("0.5");
    CHECK(abs(tab.Rstar[n] - (tab.Rtilde[n] - c)) < pow10(50, kCfg.bits));
  }
}

TEST_CASE("parity splitting at alpha = 1") {
  auto rows = verify_parity_splitting(3, {dec("1"), dec("0.5")}, kCfg);
  for (const auto& r : rows) CHECK_MESSAGE(r.pass, r.identity << " n=" << r.n << " " << to_decimal(r.residual, 3));
  for (const char* id : {"hd1", "hd2", "rela1", "rela2", "dou1", "dou2", "rs1", "rs2", "de1", "de2"})
    CHECK(find(rows, id, 3).residual < pow10(25, kCfg.bits));
  CHECK(find(rows, "hd1", 0).trivially_true);
  const auto& h = find(rows, "hn", 2);
  CHECK((h.branch == "+" || h.branch == "-"));
  CHECK(h.note.find("a=") == 0);
}

TEST_CASE("sigma form of the tilde H_n at a = -1/2, b = 1") {
  auto tab = tilde_moments_and_table(2, {dec("-0.5"), dec("1"), dec("0.5")}, kCfg);
  auto rows = verify_jmo_sigma_form({1, 2}, tab, kCfg);
  CHECK(rows.size() == 4);
  for (const auto& r : rows) CHECK_MESSAGE(r.pass, r.identity << " n=" << r.n);
  CHECK_THROWS_AS(verify_jmo_sigma_form({9}, tab, kCfg), UsageError);
}
