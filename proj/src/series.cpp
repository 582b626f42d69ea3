#include <algorithm>
#include <cctype>
#include <map>

#include "hankelpv/scaling.hpp"
#include "hankelpv/special.hpp"

namespace hankelpv {

mpq_class parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw UsageError("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpq_class q = parse_rational(s.substr(0, slash)) / parse_rational(s.substr(slash + 1));
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  mpz_class mant = 0;
  long frac_digits = 0, digits = 0;
  bool dot = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (dot) throw UsageError("malformed number '" + text + "'");
      dot = true;
      continue;
    }
    mant = mant * 10 + (s[i] - '0');
    ++digits;
    if (dot) ++frac_digits;
  }
  if (digits == 0) throw UsageError("malformed number '" + text + "'");
  long ex = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw UsageError("malformed number '" + text + "'");
    try {
      std::size_t used = 0;
      ex = std::stol(s.substr(i + 1), &used);
      if (used != s.size() - i - 1) throw UsageError("malformed number '" + text + "'");
    } catch (const std::logic_error&) {
      throw UsageError("malformed number '" + text + "'");
    }
  }
  ex -= frac_digits;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(ex < 0 ? -ex : ex));
  mpq_class q = ex < 0 ? mpq_class(mant, p10) : mpq_class(mant * p10);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

Real to_real(const mpq_class& q, Bits bits) {
  Real r(Real::uninit, bits);
  mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

namespace {

struct KindInfo {
  SeriesKind kind;
  const char* name;
  bool large, parametric;
};

const KindInfo kKinds[] = {
    {SeriesKind::g1_small, "g1-small", false, false},
    {SeriesKind::g2_small, "g2-small", false, false},
    {SeriesKind::g1_large, "g1-large", true, false},
    {SeriesKind::g2_large, "g2-large", true, false},
    {SeriesKind::g_small, "g-small", false, true},
    {SeriesKind::g_large, "g-large", true, true},
    {SeriesKind::delta_small, "delta-small", false, false},
    {SeriesKind::delta_large, "delta-large", true, false},
    {SeriesKind::delta_ab_small, "delta-ab-small", false, true},
    {SeriesKind::delta_ab_large, "delta-ab-large", true, true},
};

const KindInfo& info(SeriesKind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i;
  throw UsageError("unknown series kind");
}

mpq_class Q(long p, long q = 1) {
  mpq_class r(p, q);
  r.canonicalize();
  return r;
}

// Coefficients c_1..c_order of g(s,a) = sum c_k s^k.  Substituting into
// g s^2 g'' = s^2 g'^2 - s g g' + 2 g^3 + a s g/2 - s^2/4 gives at s^{m+1}
// a linear equation for c_m with coefficient (m-1)^2/(2a) - a/2.
std::vector<mpq_class> g_small_coeffs(const mpq_class& a, int order) {
  if (a == 0) throw UsageError("the small-s series needs a != 0");
  std::vector<mpq_class> c(order + 1, mpq_class(0));
  c[1] = 1 / (2 * a);
  for (int m = 2; m <= order; ++m) {
    const int M = m + 1;
    mpq_class lead = c[1] * (m - 1) * (m - 1) - a / 2;
    if (lead == 0) throw UsageError("the small-s series does not exist for integer a");
    mpq_class rest = 0;
    for (int i = 2; i < m; ++i) rest += c[i] * c[M - i] * (i - (M - i)) * (i - (M - i)) / 2;
    for (int i = 1; i <= M - 2; ++i)
      for (int j = 1; i + j <= M - 1; ++j) rest -= 2 * c[i] * c[j] * c[M - i - j];
    c[m] = -rest / lead;
  }
  return c;
}

// Coefficients d_0..d_{order-1} of g(s,a) = sum d_k s^{(2-k)/3}.  The equation
// at s^{2-m/3} is linear in d_m with coefficient -6 d_0^2 = -3/2.
std::vector<mpq_class> g_large_coeffs(const mpq_class& a, int order) {
  std::vector<mpq_class> d(order, mpq_class(0));
  d[0] = Q(1, 2);
  for (int m = 1; m < order; ++m) {
    mpq_class rest = 0;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; i + j <= m; ++j) {
        const int l = m - i - j;
        if (i == m || j == m || l == m) continue;
        rest -= 2 * d[i] * d[j] * d[l];
      }
    rest -= a / 2 * d[m - 1];
    for (int i = 0; i <= m - 2; ++i) {
      const int j = m - 2 - i;
      const mpq_class dp = Q(j - i, 3);
      rest += d[i] * d[j] * dp * dp / 2;
    }
    d[m] = 2 * rest / 3;
  }
  return d;
}

mpq_class large_exponent(int k) { return Q(2 - k, 3); }

void add_term(std::vector<SeriesTerm>& terms, const mpq_class& e, const mpq_class& c) {
  if (c != 0) terms.push_back({e, c});
}

// Termwise sum of two expansions with the same orientation.
std::vector<SeriesTerm> merge(const std::vector<SeriesTerm>& x, const std::vector<SeriesTerm>& y,
                              bool large) {
  std::map<mpq_class, mpq_class> acc;
  for (const auto* v : {&x, &y})
    for (const auto& t : *v) acc[t.exponent] += t.coefficient;
  std::vector<SeriesTerm> out;
  for (const auto& [e, c] : acc) add_term(out, e, c);
  if (large) std::reverse(out.begin(), out.end());
  return out;
}

Real constant_for(SeriesKind k, const mpq_class& a, Bits bits, std::string* name) {
  if (k == SeriesKind::delta_large) {
    *name = "ln2/12 + 3 zeta'(-1)";
    return dyson_constant(bits);
  }
  if (k == SeriesKind::delta_ab_large) {
    mpq_class twice = 2 * a;
    if (twice.get_den() != 1 || a <= -1) {
      *name = "c(a) (needs integer or half-integer a > -1)";
      return Real::nan(bits);
    }
    *name = "c(a)";
    return barnes_constant(a, bits);
  }
  return Real(0, bits);
}

mpq_class printed_log_coefficient(SeriesKind k, const mpq_class& a) {
  if (k == SeriesKind::delta_large) return Q(-1, 36);
  if (k == SeriesKind::delta_ab_large) return (1 - 6 * a * a) / 36;
  return 0;
}

SeriesExpansion derived_impl(SeriesKind kind, const mpq_class& a, int order, Bits bits) {
  if (order < 1) throw UsageError("series order must be positive");
  SeriesExpansion e;
  e.kind = kind;
  e.a = a;
  const mpq_class half = Q(1, 2);
  auto g_small = [&](const mpq_class& aa, const mpq_class& scale) {
    auto c = g_small_coeffs(aa, order);
    std::vector<SeriesTerm> t;
    for (int k = 1; k <= order; ++k) add_term(t, k, scale * c[k]);
    return t;
  };
  auto g_large = [&](const mpq_class& aa, const mpq_class& scale) {
    auto d = g_large_coeffs(aa, order);
    std::vector<SeriesTerm> t;
    for (int k = 0; k < order; ++k) add_term(t, large_exponent(k), scale * d[k]);
    return t;
  };
  // ln Delta from s (s ln Delta')' = -g: s^p -> -s^p / p^2.
  auto integrate_twice = [](const std::vector<SeriesTerm>& g) {
    std::vector<SeriesTerm> t;
    for (const auto& x : g) {
      if (x.exponent == 0)
        throw NumericError(Failure::non_convergence, "s^0 term in g gives a ln^2 s term");
      add_term(t, x.exponent, -x.coefficient / (x.exponent * x.exponent));
    }
    return t;
  };
  switch (kind) {
    case SeriesKind::g1_small: e.terms = g_small(-half, 4); break;
    case SeriesKind::g2_small: e.terms = g_small(half, 4); break;
    case SeriesKind::g1_large: e.terms = g_large(-half, 4); break;
    case SeriesKind::g2_large: e.terms = g_large(half, 4); break;
    case SeriesKind::g_small: e.terms = g_small(a, 1); break;
    case SeriesKind::g_large: e.terms = g_large(a, 1); break;
    case SeriesKind::delta_ab_small: e.terms = integrate_twice(g_small(a, 1)); break;
    case SeriesKind::delta_ab_large: e.terms = integrate_twice(g_large(a, 1)); break;
    case SeriesKind::delta_small:
      e.terms = merge(integrate_twice(g_small(half, 1)), integrate_twice(g_small(-half, 1)), false);
      break;
    case SeriesKind::delta_large:
      e.terms = merge(integrate_twice(g_large(half, 1)), integrate_twice(g_large(-half, 1)), true);
      break;
  }
  e.log_coefficient = printed_log_coefficient(kind, a);
  e.constant = constant_for(kind, a, bits, &e.constant_name);
  return e;
}

// First nonzero term of `more` beyond the last term of `e`.
void attach_first_omitted(SeriesExpansion& e, const SeriesExpansion& more) {
  const bool large = is_large(e.kind);
  if (e.terms.empty()) return;
  const mpq_class last = e.terms.back().exponent;
  for (const auto& t : more.terms) {
    if (large ? t.exponent < last : t.exponent > last) {
      e.first_omitted = t;
      e.has_first_omitted = true;
      return;
    }
  }
}

std::vector<SeriesTerm> from_list(std::initializer_list<std::pair<mpq_class, mpq_class>> l) {
  std::vector<SeriesTerm> t;
  for (const auto& [e, c] : l) add_term(t, e, c);
  return t;
}

void require_non_integer(const mpq_class& a) {
  if (a.get_den() == 1) throw UsageError("the printed small-s expansion needs a not an integer");
}

}  // namespace

const char* series_kind_name(SeriesKind k) { return info(k).name; }

SeriesKind parse_series_kind(const std::string& name) {
  for (const auto& i : kKinds)
    if (name == i.name) return i.kind;
  throw UsageError("unknown series kind '" + name + "'");
}

bool is_large(SeriesKind k) { return info(k).large; }
bool is_parametric(SeriesKind k) { return info(k).parametric; }

Real SeriesExpansion::truncation_estimator(const Real& s) const {
  const Bits bits = constant.prec();
  if (!has_first_omitted) return Real::nan(bits);
  if (s.is_zero()) return Real(0, bits);
  const SeriesTerm& t = first_omitted;
  return abs(to_real(t.coefficient, bits) * pow(s.with_prec(bits), to_real(t.exponent, bits)));
}

SeriesExpansion derived_series(SeriesKind kind, const mpq_class& a, int order, Bits bits) {
  SeriesExpansion e = derived_impl(kind, a, order, bits);
  attach_first_omitted(e, derived_impl(kind, a, order + 12, bits));
  return e;
}

SeriesExpansion printed_series(SeriesKind kind, const mpq_class& a, Bits bits) {
  SeriesExpansion e;
  e.kind = kind;
  e.a = a;
  const mpq_class a2 = a * a;
  switch (kind) {
    case SeriesKind::g1_small:
      e.terms = from_list({{1, -4}, {2, Q(32, 3)}, {3, Q(-256, 15)}, {4, Q(8192, 315)},
                           {5, Q(-311296, 8505)}, {6, Q(7733248, 155925)}});
      break;
    case SeriesKind::g2_small:
      e.terms = from_list({{1, 4}, {2, Q(32, 3)}, {3, Q(256, 15)}, {4, Q(8192, 315)},
                           {5, Q(311296, 8505)}, {6, Q(7733248, 155925)}});
      break;
    case SeriesKind::g1_large:
      e.terms = from_list({{Q(2, 3), 2}, {Q(1, 3), Q(1, 3)}, {Q(-1, 3), Q(1, 108)},
                           {Q(-2, 3), Q(-1, 648)}, {-1, Q(1, 324)}, {Q(-4, 3), Q(-7, 5832)}});
      break;
    case SeriesKind::g2_large:
      e.terms = from_list({{Q(2, 3), 2}, {Q(1, 3), Q(-1, 3)}, {Q(-1, 3), Q(-1, 108)},
                           {Q(-2, 3), Q(-1, 648)}, {-1, Q(-1, 324)}, {Q(-4, 3), Q(-7, 5832)}});
      break;
    case SeriesKind::g_small: {
      require_non_integer(a);
      const mpq_class f1 = a2 - 1, f4 = a2 - 4, f9 = a2 - 9, f16 = a2 - 16, f25 = a2 - 25;
      const mpq_class a3 = a2 * a, a4 = a2 * a2, a5 = a4 * a, a6 = a4 * a2;
      e.terms = from_list({
          {1, 1 / (2 * a)},
          {2, -1 / (2 * a2 * f1)},
          {3, 3 / (2 * a3 * f1 * f4)},
          {4, 3 * (3 - 2 * a2) / (a4 * f1 * f1 * f4 * f9)},
          {5, 5 * (11 * a2 - 36) / (2 * a5 * f1 * f1 * f4 * f9 * f16)},
          {6, -3 * (91 * a6 - 1115 * a4 + 4219 * a2 - 3600) /
                  (2 * a6 * f1 * f1 * f1 * f4 * f4 * f9 * f16 * f25)},
      });
      break;
    }
    case SeriesKind::g_large: {
      const mpq_class f1 = a2 - 1;
      e.terms = from_list({{Q(2, 3), Q(1, 2)},
                           {Q(1, 3), -a / 6},
                           {Q(-1, 3), a * f1 / 162},
                           {Q(-2, 3), a2 * f1 / 486},
                           {-1, a * f1 / 486},
                           {Q(-4, 3), -a2 * f1 * (2 * a2 - 11) / 6561}});
      break;
    }
    case SeriesKind::delta_small:
      e.terms = from_list({{2, Q(-4, 3)}, {4, Q(-256, 315)}, {6, Q(-966656, 1403325)}});
      break;
    case SeriesKind::delta_large:
      e.terms = from_list({{Q(2, 3), Q(-9, 4)}, {Q(-2, 3), Q(1, 576)}, {Q(-4, 3), Q(7, 20736)}});
      break;
    case SeriesKind::delta_ab_small: {
      require_non_integer(a);
      const mpq_class f1 = a2 - 1, f4 = a2 - 4, f9 = a2 - 9, f16 = a2 - 16, f25 = a2 - 25;
      const mpq_class a3 = a2 * a, a4 = a2 * a2, a5 = a4 * a, a6 = a4 * a2;
      e.terms = from_list({
          {1, -1 / (2 * a)},
          {2, 1 / (8 * a2 * f1)},
          {3, -1 / (6 * a3 * f1 * f4)},
          {4, 3 * (2 * a2 - 3) / (16 * a4 * f1 * f1 * f4 * f9)},
          {5, -(11 * a2 - 36) / (10 * a5 * f1 * f1 * f4 * f9 * f16)},
          {6, (91 * a6 - 1115 * a4 + 4219 * a2 - 3600) /
                  (24 * a6 * f1 * f1 * f1 * f4 * f4 * f9 * f16 * f25)},
      });
      break;
    }
    case SeriesKind::delta_ab_large: {
      const mpq_class f1 = a2 - 1;
      e.terms = from_list({{Q(2, 3), Q(-9, 8)},
                           {Q(1, 3), 3 * a / 2},
                           {Q(-1, 3), -a * f1 / 18},
                           {Q(-2, 3), -a2 * f1 / 216},
                           {-1, -a * f1 / 486},
                           {Q(-4, 3), a2 * f1 * (2 * a2 - 11) / 11664},
                           {Q(-5, 3), a * f1 * (a2 * a2 - a2 - 15) / 21870}});
      break;
    }
  }
  e.log_coefficient = printed_log_coefficient(kind, a);
  e.constant = constant_for(kind, a, bits, &e.constant_name);
  attach_first_omitted(e, derived_impl(kind, a, 24, bits));
  return e;
}

SeriesValue series_eval(const SeriesExpansion& e, const Real& s_in) {
  const Bits bits = e.constant.prec();
  const Real s = s_in.with_prec(bits);
  if (s < 0) throw UsageError("series are evaluated at s >= 0");
  SeriesValue out;
  const bool large = is_large(e.kind);
  if (s.is_zero()) {
    if (large) throw UsageError("large-s expansion evaluated at s = 0");
    out.value = Real(0, bits);
    out.truncation_estimate = Real(0, bits);
    return out;
  }
  Real sum = e.constant, last(0, bits);
  for (const auto& t : e.terms) {
    last = to_real(t.coefficient, bits) * pow(s, to_real(t.exponent, bits));
    sum += last;
  }
  if (e.log_coefficient != 0) sum += to_real(e.log_coefficient, bits) * log(s);
  out.value = sum;
  out.truncation_estimate = e.truncation_estimator(s);
  if (e.has_first_omitted && !(out.truncation_estimate < abs(last))) {
    out.in_regime = false;
    out.diagnostic = std::string(series_kind_name(e.kind)) + " outside its regime at s=" +
                     to_decimal(s, 6) + ": first omitted term " +
                     to_decimal(out.truncation_estimate, 3) + " >= last kept " +
                     to_decimal(abs(last), 3);
  }
  return out;
}

SeriesValue series_eval(SeriesKind kind, const Real& s, Bits bits, const mpq_class& a) {
  return series_eval(printed_series(kind, a, bits), s);
}

Real barnes_constant(const mpq_class& a, Bits bits) {
  mpq_class twice = 2 * a;
  if (twice.get_den() != 1 || a <= -1)
    throw UsageError("c(a) is available for integer or half-integer a > -1");
  Real ar = to_real(a, bits);
  return log_barnes_g(ar + 1) - ar / 2 * log(2 * Real::pi(bits));
}

Real dyson_constant(Bits bits) {
  return Real::ln2(bits) / 12 + 3 * zeta_prime_minus_one(bits);
}

}  // namespace hankelpv
