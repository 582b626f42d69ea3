#include <doctest.h>
#include <json.hpp>

#include "hankelpv/verify.hpp"

using namespace hankelpv;

namespace {

const PrecisionConfig kCfg;

WeightParams wp(const char* a, const char* t) {
  return {Real::from_string(a, kCfg.bits), Real::from_string(t, kCfg.bits)};
}

const VerificationRow& find(const std::vector<VerificationRow>& rows, const std::string& id, int n) {
  for (const auto& r : rows)
    if (r.identity == id && r.n == n) return r;
  FAIL("no row " << id << " n=" << n);
  return rows.front();
}

}  // namespace

TEST_CASE("scalar identities on oracle inputs") {
  auto in = prepare_inputs(4, wp("1", "0.5"), kCfg);
  auto rows = verify_scalar_identities(in);
  CHECK(find(rows, "s2p1", 0).trivially_true);
  CHECK(find(rows, "s1", 3).residual < pow10(30, kCfg.bits));
  for (const auto& r : rows) CHECK_MESSAGE(r.pass, r.identity << " n=" << r.n);

  auto in2 = prepare_inputs(3, wp("0.7", "0.05"), kCfg);
  CHECK(find(verify_scalar_identities(in2), "imp", 2).pass);
}

TEST_CASE("difference equations") {
  auto in = prepare_inputs(10, wp("1", "0.5"), kCfg);
  auto rows = verify_difference_equations(in);
  for (int n = 1; n <= 10; ++n) {
    CHECK(find(rows, "rn-diff", n).pass);
    CHECK(find(rows, "sd", n).pass);
  }
  auto in2 = prepare_inputs(3, wp("2.3", "2"), kCfg);
  const auto& Rn = find(verify_difference_equations(in2), "Rn-diff", 2);
  CHECK(Rn.pass);
  CHECK((Rn.branch == "+" || Rn.branch == "-"));
}

TEST_CASE("sigma difference equation initial data from the Kummer closed forms") {
  auto p = wp("0.7", "0.5");
  auto in = prepare_inputs(2, p, kCfg);
  Real R0 = r1_closed(p), R1 = R1_closed(p);
  CHECK(abs(in.oracle.sigma[1] + R0) < pow10(40, kCfg.bits));
  CHECK(abs(in.oracle.sigma[2] + R0 + R1) < pow10(40, kCfg.bits));
}

TEST_CASE("differential equations from differentiated tables") {
  auto in = prepare_inputs(4, wp("1", "0.5"), kCfg);
  auto rows = verify_differential(in);
  CHECK(find(rows, "eq1", 3).pass);
  CHECK(find(rows, "pv", 2).pass);
  for (const auto& r : rows) CHECK_MESSAGE(r.pass, r.identity << " n=" << r.n);

  auto in2 = prepare_inputs(4, wp("0.7", "0.05"), kCfg);
  const auto& s = find(verify_differential(in2), "sode", 4);
  CHECK(s.pass);
  CHECK((s.branch == "+" || s.branch == "-"));
}

TEST_CASE("ladder relations and the linear ODE for P_n") {
  auto in = prepare_inputs(8, wp("1", "0.5"), kCfg);
  auto zs = default_ladder_points(kCfg.bits);
  for (const auto& r : verify_ladder(in, zs)) CHECK_MESSAGE(r.pass, r.identity << " n=" << r.n);
  auto lin = verify_linear_ode_Pn(in, {Real::from_string("0.37", kCfg.bits)});
  CHECK(find(lin, "linear-ode-Pn", 1).pass);
  CHECK(find(lin, "linear-ode-Pn", 0).pass);

  auto in2 = prepare_inputs(4, wp("0.7", "0.05"), kCfg);
  auto lin2 = verify_linear_ode_Pn(in2, {Real::from_string("0.8", kCfg.bits)});
  CHECK(find(lin2, "linear-ode-Pn", 4).pass);
  const auto& pole = find(verify_linear_ode_Pn(in2, {Real(1, kCfg.bits)}), "linear-ode-Pn", 2);
  CHECK_FALSE(pole.pass);
  CHECK(pole.note.find("pole") != std::string::npos);
}

TEST_CASE("integral representation of ln D_n") {
  auto r2 = verify_integral_representation_at(2, wp("1", "0.5"), kCfg);
  CHECK(r2.residual < pow10(20, kCfg.bits));
  auto r6 = verify_integral_representation_at(6, wp("2.3", "1"), kCfg);
  CHECK(r6.residual < pow10(15, kCfg.bits));
  auto r0 = verify_integral_representation_at(3, wp("1", "0"), kCfg);
  CHECK(r0.trivially_true);
}

TEST_CASE("report covers every identity and serializes stably") {
  VerificationReport rep;
  rep.rows = verify_grid_point(2, wp("1", "0.5"), kCfg);
  rep.sort();
  CHECK(rep.missing_ids().empty());
  CHECK(rep.all_pass());
  CHECK(rep.rows.front().identity == identity_ids().front());
  CHECK(rep.rows.back().identity == identity_ids().back());

  auto js = nlohmann::json::parse(rep.to_json());
  REQUIRE(js.size() == rep.rows.size());
  CHECK(js[0]["identity"] == "s1");
  CHECK(js[0].contains("residual"));
  CHECK(js[0]["residual"].is_string());
  auto csv = rep.to_csv();
  CHECK(csv.rfind("identity,n,alpha,t,bits,residual,pass,branch", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rep.rows.size()) + 1);

  VerificationReport empty;
  CHECK(empty.missing_ids().size() == identity_ids().size());
}

TEST_CASE("dependency graph names an independent route for every identity") {
  const auto& g = identity_dependency_graph();
  REQUIRE(g.size() == identity_ids().size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i].identity == identity_ids()[i]);
    bool independent = g[i].inputs.find("quad") != std::string::npos ||
                       g[i].inputs.find("differentiated") != std::string::npos;
    CHECK_MESSAGE(independent, g[i].identity);
  }
}
