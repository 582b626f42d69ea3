// hankelpv: command-line front end.  Every real number is read from a
// decimal string at full working precision and written as a decimal string
// with target_digits significant digits.
//
// Exit status: 0 success, 1 a verification row failed, 2 usage or numeric
// diagnostic.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hankelpv/aux.hpp"
#include "hankelpv/bridge.hpp"
#include "hankelpv/precision.hpp"
#include "hankelpv/real.hpp"
#include "hankelpv/scaling.hpp"
#include "hankelpv/verify.hpp"
#include "hankelpv/weight.hpp"

using namespace hankelpv;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitDiag = 2;

// Column-ordered table of strings; `plots` name (x, y) column pairs for
// --emit-plot-data.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  struct Plot {
    std::string name, x, y;
  };
  std::vector<Plot> plots;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw std::logic_error("no column " + name);
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string render(const Table& t, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    // ordered_json keeps keys in column order.
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      nlohmann::ordered_json rec = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) rec[t.columns[i]] = r[i];
      arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\n";
  }
  return os.str();
}

void emit_plots(const Table& t, const std::string& command, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& p : t.plots) {
    auto xi = t.col(p.x), yi = t.col(p.y);
    std::ofstream f(std::filesystem::path(dir) / (command + "_" + p.name + ".dat"));
    if (!f) throw UsageError("cannot write plot data to " + dir);
    f << "# " << p.x << " " << p.y << "\n";
    for (const auto& r : t.rows)
      if (!r[xi].empty() && !r[yi].empty()) f << r[xi] << " " << r[yi] << "\n";
  }
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad integer list entry '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::string yes(bool b) { return b ? "true" : "false"; }

struct Common {
  long bits = 0;
  int digits = 0;
  std::string format = "csv";
  std::string output;
  std::string plot_dir;

  PrecisionConfig config() const {
    PrecisionConfig c;
    c.bits = bits;
    c.target_digits = digits > 0 ? digits : std::min(60, PrecisionConfig::max_target_digits(bits));
    c.validate();
    return c;
  }
};

long default_bits() {
  if (const char* env = std::getenv("HANKELPV_BITS")) {
    try {
      std::size_t used = 0;
      long b = std::stol(env, &used);
      if (used == std::string(env).size()) return b;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("HANKELPV_BITS is not an integer: ") + env);
  }
  return 512;
}

class Runner {
 public:
  explicit Runner(const Common& c) : c_(c), cfg_(c.config()), d_(cfg_.target_digits) {}

  Real num(const std::string& s) const { return Real::from_string(s, cfg_.bits); }
  std::string dec(const Real& x) const { return to_decimal(x, d_); }
  std::string small(const Real& x) const { return to_decimal(x, 6); }
  const PrecisionConfig& cfg() const { return cfg_; }

  void finish(const Table& t, const std::string& command) const {
    std::string text = render(t, c_.format);
    if (c_.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(c_.output);
      if (!f) throw UsageError("cannot open " + c_.output);
      f << text;
    }
    if (!c_.plot_dir.empty()) emit_plots(t, command, c_.plot_dir);
  }

 private:
  Common c_;
  PrecisionConfig cfg_;
  int d_;
};

Table verification_table(const std::vector<VerificationRow>& rows, const Runner& r) {
  Table t;
  t.columns = {"identity", "n", "alpha", "t", "bits", "residual", "pass", "branch", "lhs_scale",
               "trivially_true", "note"};
  for (const auto& v : rows)
    t.add({v.identity, std::to_string(v.n), r.dec(v.alpha), r.dec(v.t), std::to_string(v.bits),
           r.small(v.residual), yes(v.pass), v.branch, r.small(v.lhs_scale), yes(v.trivially_true),
           v.note});
  return t;
}

bool all_pass(const std::vector<VerificationRow>& rows) {
  for (const auto& v : rows)
    if (!v.pass) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hankel determinants of (1-x^2)^alpha exp(-t/x^2): moments, recurrences, "
               "ladder quantities, identity checks, Painleve evolutions and double-scaling limits"};
  app.require_subcommand(1);

  Common common;
  try {
    common.bits = default_bits();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiag;
  }
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--bits", common.bits, "working precision in bits (default HANKELPV_BITS or 512)");
    sub->add_option("--digits", common.digits, "target digits (default min(60, supported))");
    sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", common.output, "output file (default stdout)");
    sub->add_option("--emit-plot-data", common.plot_dir, "directory for (x,y) .dat files");
  };

  std::string alpha = "1", t = "0", s, a = "1/2", t0, t_end, s0, s_lo = "0.01", s_hi = "20";
  std::string suite = "all", mode = "g1", kind = "g1-small", n_list = "8,16,32,64", seed = "small";
  std::string samples_s, alphas = "0.7,1,2.3", ts = "0.05,0.5,2";
  int j_max = 10, n_max = 8, n = 1, samples = 10, order = 0;
  bool oracle = false, grid = false;

  auto* c_moments = app.add_subcommand("moments", "moments mu_j, j = 0..j-max");
  c_moments->add_option("--alpha", alpha)->required();
  c_moments->add_option("--t", t)->required();
  c_moments->add_option("--j-max", j_max);
  c_moments->add_flag("--oracle", oracle, "add the tanh-sinh quadrature column");

  auto* c_hankel = app.add_subcommand("hankel", "ln D_n(t) and ln D_n(0), n = 0..n-max");
  c_hankel->add_option("--alpha", alpha)->required();
  c_hankel->add_option("--t", t)->required();
  c_hankel->add_option("--n-max", n_max);

  auto* c_rec = app.add_subcommand("recurrence", "h_n, beta_n, p(n,t)");
  c_rec->add_option("--alpha", alpha)->required();
  c_rec->add_option("--t", t)->required();
  c_rec->add_option("--n-max", n_max);

  auto* c_aux = app.add_subcommand("aux", "r_n, R_n, sigma_n");
  c_aux->add_option("--alpha", alpha)->required();
  c_aux->add_option("--t", t)->required();
  c_aux->add_option("--n-max", n_max);
  c_aux->add_flag("--oracle", oracle, "add the quadrature-route R_n and r_n");

  auto* c_verify = app.add_subcommand("verify", "identity suite");
  c_verify->add_option("--suite", suite, "all, scalar, difference, differential, ladder, linear-ode, integral")
      ->check(CLI::IsMember({"all", "scalar", "difference", "differential", "ladder", "linear-ode", "integral"}));
  c_verify->add_option("--n-max", n_max);
  c_verify->add_option("--alpha", alpha);
  c_verify->add_option("--t", t);
  c_verify->add_flag("--grid", grid, "run the alpha x t grid instead of one point");
  c_verify->add_option("--alphas", alphas, "grid alphas");
  c_verify->add_option("--ts", ts, "grid t values");

  auto* c_bridge = app.add_subcommand("bridge", "parity-splitting identities with the Pollaczek-Jacobi weight");
  c_bridge->add_option("--alpha", alpha)->required();
  c_bridge->add_option("--t", t)->required();
  c_bridge->add_option("--n-max", n_max);

  auto* c_pv = app.add_subcommand("solve-pv", "evolve R_n(t) by the Painleve V equation");
  c_pv->add_option("--n", n)->required();
  c_pv->add_option("--alpha", alpha)->required();
  c_pv->add_option("--t0", t0)->required();
  c_pv->add_option("--t-end", t_end)->required();
  c_pv->add_option("--samples", samples);

  auto* c_p3 = app.add_subcommand("solve-p3", "integrate Painleve III' for g(s,a)");
  c_p3->add_option("--a", a, "parameter (decimal or p/q)");
  c_p3->add_option("--s-end", s)->required();
  c_p3->add_option("--s0", s0, "seed point (default from the truncation estimate)");
  c_p3->add_option("--seed", seed, "small or large")->check(CLI::IsMember({"small", "large"}));
  c_p3->add_option("--sample-points", samples_s, "comma-separated s values");

  auto* c_scan = app.add_subcommand("scan", "double-scaling scan with Richardson extrapolation");
  c_scan->add_option("--mode", mode, "g1, g2, delta1, delta2, sigma-n4");
  c_scan->add_option("--s", s)->required();
  c_scan->add_option("--n-list", n_list);
  c_scan->add_option("--alpha", alpha);

  auto* c_series = app.add_subcommand("series", "small/large-s expansions: terms, or values at --s");
  c_series->add_option("--kind", kind);
  c_series->add_option("--a", a, "parameter of the g(s,a) / Delta(s,a) kinds");
  c_series->add_option("--s", s, "comma-separated evaluation points");
  c_series->add_option("--order", order, "use the recursion with this many terms instead of the printed coefficients");

  auto* c_dyson = app.add_subcommand("dyson", "constant term of ln Delta_1 at large s");
  c_dyson->add_option("--alpha", alpha);
  c_dyson->add_option("--s-lo", s_lo);
  c_dyson->add_option("--s-hi", s_hi);
  c_dyson->add_option("--n-list", n_list);

  for (auto* sub : app.get_subcommands({})) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitDiag;
  }

  try {
    Runner r(common);
    const auto& cfg = r.cfg();
    Table tab;
    int rc = 0;
    std::string command = app.get_subcommands().front()->get_name();

    if (command == "moments") {
      if (j_max < 0) throw UsageError("--j-max must be >= 0");
      WeightParams p{r.num(alpha), r.num(t)};
      auto m = moments(j_max, p, cfg);
      std::vector<Real> q;
      if (oracle) q = moments_quadrature(j_max, p, cfg);
      tab.columns = {"j", "value", "provenance", "cancelled_bits"};
      if (oracle) tab.columns.insert(tab.columns.end(), {"quadrature", "relative_difference"});
      for (int j = 0; j <= j_max; ++j) {
        const auto& mu = m.mu[j];
        std::vector<std::string> row{std::to_string(j), r.dec(mu.value), provenance_name(mu.provenance),
                                     std::to_string(mu.cancelled_bits)};
        if (oracle) {
          row.push_back(r.dec(q[j]));
          row.push_back(q[j].is_zero() ? (mu.value.is_zero() ? "0" : "inf")
                                       : r.small(abs(mu.value - q[j]) / abs(q[j])));
        }
        tab.add(std::move(row));
      }
      tab.plots = {{"mu", "j", "value"}};
    } else if (command == "hankel") {
      WeightParams p{r.num(alpha), r.num(t)};
      auto rt = recurrence_table(n_max, p, cfg);
      tab.columns = {"n", "log_D", "log_D0", "log_ratio"};
      for (int k = 0; k <= n_max; ++k) {
        Real d0 = hankel_det_t0(k, p.alpha, cfg);
        tab.add({std::to_string(k), r.dec(rt.log_d[k]), r.dec(d0), r.dec(rt.log_d[k] - d0)});
      }
      tab.plots = {{"logD", "n", "log_D"}};
    } else if (command == "recurrence") {
      WeightParams p{r.num(alpha), r.num(t)};
      auto rt = recurrence_table(n_max, p, cfg);
      tab.columns = {"n", "h", "beta", "p"};
      for (int k = 0; k <= n_max; ++k)
        tab.add({std::to_string(k), r.dec(rt.h[k]), r.dec(rt.beta[k]), r.dec(rt.p1[k])});
      tab.plots = {{"beta", "n", "beta"}};
    } else if (command == "aux") {
      WeightParams p{r.num(alpha), r.num(t)};
      auto rt = recurrence_table(n_max + 1, p, cfg);
      auto ax = build_aux(rt);
      std::optional<AuxTable> oq;
      if (oracle) oq = build_aux_oracle(rt, cfg);
      tab.columns = {"n", "r", "R", "sigma"};
      if (oracle) tab.columns.insert(tab.columns.end(), {"r_quadrature", "R_quadrature"});
      for (int k = 0; k <= n_max; ++k) {
        std::vector<std::string> row{std::to_string(k), r.dec(ax.r[k]), r.dec(ax.R[k]), r.dec(ax.sigma[k])};
        if (oq) {
          row.push_back(r.dec(oq->r[k]));
          row.push_back(r.dec(oq->R[k]));
        }
        tab.add(std::move(row));
      }
      tab.plots = {{"R", "n", "R"}, {"sigma", "n", "sigma"}};
    } else if (command == "verify") {
      std::vector<std::pair<std::string, std::string>> points;
      if (grid) {
        for (const auto& al : split(alphas))
          for (const auto& tv : split(ts)) points.emplace_back(al, tv);
      } else {
        points.emplace_back(alpha, t);
      }
      std::vector<VerificationRow> rows;
      auto append = [&](std::vector<VerificationRow> v) { rows.insert(rows.end(), v.begin(), v.end()); };
      for (const auto& [al, tv] : points) {
        WeightParams p{r.num(al), r.num(tv)};
        if (suite == "integral") {
          append(verify_integral_representation(n_max, p, cfg));
          continue;
        }
        if (suite == "all") {
          append(verify_grid_point(n_max, p, cfg));
          continue;
        }
        auto in = prepare_inputs(n_max, p, cfg);
        auto zs = default_ladder_points(cfg.bits);
        if (suite == "scalar") append(verify_scalar_identities(in));
        if (suite == "difference") append(verify_difference_equations(in));
        if (suite == "differential") append(verify_differential(in));
        if (suite == "ladder") append(verify_ladder(in, zs));
        if (suite == "linear-ode") append(verify_linear_ode_Pn(in, zs));
      }
      VerificationReport rep{rows};
      rep.sort();
      tab = verification_table(rep.rows, r);
      if (!rep.all_pass()) rc = kExitFail;
    } else if (command == "bridge") {
      auto rows = verify_parity_splitting(n_max, WeightParams{r.num(alpha), r.num(t)}, cfg);
      tab = verification_table(rows, r);
      if (!all_pass(rows)) rc = kExitFail;
    } else if (command == "solve-pv") {
      auto tr = continue_pv(n, r.num(alpha), r.num(t0), r.num(t_end), cfg, samples);
      tab.columns = {"t", "R", "dR", "d2R", "pv_residual"};
      for (const auto& pt : tr.samples)
        tab.add({r.dec(pt.t), r.dec(pt.R), r.dec(pt.dR), r.dec(pt.d2R), r.small(pt.pv_residual)});
      tab.plots = {{"R", "t", "R"}};
      if (tr.halted) {
        std::cerr << "diagnostic: " << tr.halt_reason << "\n";
        rc = kExitDiag;
      } else {
        std::cerr << "endpoint_error=" << r.small(tr.endpoint_error)
                  << " max_pv_residual=" << r.small(tr.max_pv_residual) << " steps=" << tr.steps << "\n";
      }
    } else if (command == "solve-p3") {
      PiiiOptions opt;
      opt.seed = seed == "large" ? PiiiOptions::Seed::large_s : PiiiOptions::Seed::small_s;
      if (!s0.empty()) opt.s0 = r.num(s0);
      if (!samples_s.empty())
        for (const auto& x : split(samples_s)) opt.sample_points.push_back(r.num(x));
      auto tr = solve_piii_prime(parse_rational(a), r.num(s), cfg, opt);
      tab.columns = {"s", "g", "dg", "J", "log_Delta"};
      for (const auto& pt : tr.samples)
        tab.add({r.dec(pt.s), r.dec(pt.g), r.dec(pt.dg), r.dec(pt.J), r.dec(pt.logDelta)});
      if (!tr.halted)
        tab.add({r.dec(tr.end.s), r.dec(tr.end.g), r.dec(tr.end.dg), r.dec(tr.end.J), r.dec(tr.end.logDelta)});
      tab.plots = {{"g", "s", "g"}};
      std::cerr << "s0=" << r.small(tr.s0) << " seed_truncation=" << r.small(tr.seed_truncation) << "\n";
      if (tr.halted) {
        std::cerr << "diagnostic: " << tr.halt_reason << " (last s=" << r.small(tr.end.s) << ")\n";
        rc = kExitDiag;
      }
    } else if (command == "scan") {
      auto ns = parse_int_list(n_list);
      auto res = double_scaling_scan(r.num(s), ns, r.num(alpha), parse_scan_mode(mode), cfg);
      std::string raw;
      for (std::size_t i = 0; i < res.raw.size(); ++i)
        raw += (i ? ";" : "") + std::to_string(res.n_list[i]) + ":" + r.dec(res.raw[i]);
      std::string notes;
      for (const auto& x : res.notes) notes += (notes.empty() ? "" : "; ") + x;
      tab.columns = {"mode", "s", "alpha", "extrapolated", "extrapolated_even", "error_bar", "reference",
                     "reference_name", "agreement_digits", "monotone", "raw", "notes"};
      tab.add({scan_mode_name(res.mode), r.dec(res.s), r.dec(res.alpha), r.dec(res.extrapolated),
               r.dec(res.extrapolated_even), r.small(res.error_bar), r.dec(res.reference),
               res.reference_name, r.small(res.agreement_digits), yes(res.monotone), raw, notes});
      if (!common.plot_dir.empty()) {
        Table pts;
        pts.columns = {"n", "raw"};
        for (std::size_t i = 0; i < res.raw.size(); ++i)
          pts.add({std::to_string(res.n_list[i]), r.dec(res.raw[i])});
        pts.plots = {{std::string(scan_mode_name(res.mode)), "n", "raw"}};
        emit_plots(pts, command, common.plot_dir);
      }
    } else if (command == "series") {
      SeriesKind k = parse_series_kind(kind);
      mpq_class aq = parse_rational(a);
      auto e = order > 0 ? derived_series(k, aq, order, cfg.bits) : printed_series(k, aq, cfg.bits);
      if (s.empty()) {
        tab.columns = {"term", "exponent", "coefficient", "coefficient_decimal"};
        for (const auto& term : e.terms)
          tab.add({"s^e", term.exponent.get_str(), term.coefficient.get_str(),
                   r.dec(to_real(term.coefficient, cfg.bits))});
        if (e.log_coefficient != 0)
          tab.add({"ln s", "", e.log_coefficient.get_str(), r.dec(to_real(e.log_coefficient, cfg.bits))});
        if (!e.constant.is_zero()) tab.add({"constant", "", e.constant_name, r.dec(e.constant)});
        if (e.has_first_omitted)
          tab.add({"first_omitted", e.first_omitted.exponent.get_str(), e.first_omitted.coefficient.get_str(),
                   r.dec(to_real(e.first_omitted.coefficient, cfg.bits))});
      } else {
        tab.columns = {"s", "value", "truncation_estimate", "in_regime", "diagnostic"};
        for (const auto& x : split(s)) {
          auto v = series_eval(e, r.num(x));
          tab.add({r.dec(r.num(x)), r.dec(v.value), r.small(v.truncation_estimate), yes(v.in_regime),
                   v.diagnostic});
        }
        tab.plots = {{series_kind_name(k), "s", "value"}};
      }
    } else if (command == "dyson") {
      auto res = dyson_constant_experiment(r.num(alpha), r.num(s_lo), r.num(s_hi), parse_int_list(n_list), cfg);
      tab.columns = {"route", "s", "log_Delta", "constant", "error_bar", "ok"};
      tab.add({"reference", "", "", r.dec(res.reference), "", "true"});
      tab.add({"barnes-sum", "", "", r.dec(res.barnes_sum), r.small(res.identity_residual), "true"});
      for (const auto& e : res.ode) tab.add({"ode", r.dec(e.s), r.dec(e.log_delta), r.dec(e.constant), "", ""});
      tab.add({"ode-constant", "", "", r.dec(res.ode_constant), r.small(res.ode_spread), yes(res.ode_ok)});
      for (const auto& e : res.finite_n)
        tab.add({"finite-n", r.dec(e.s), r.dec(e.log_delta), r.dec(e.constant), "", ""});
      tab.add({"finite-n-constant", "", "", r.dec(res.finite_n_constant), r.small(res.finite_n_error_bar),
               yes(res.finite_n_ok)});
      for (const auto& d : res.diagnostics) std::cerr << "diagnostic: " << d << "\n";
    }

    r.finish(tab, command);
    return rc;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitDiag;
  } catch (const NumericError& e) {
    std::cerr << "numeric diagnostic: " << e.what() << "\n";
    return kExitDiag;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiag;
  }
}
