#include "logtauber/catalog.hpp"

#include <gsl/gsl_sf_expint.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

#include "logtauber/errors.hpp"
#include "logtauber/means.hpp"
#include "logtauber/summation.hpp"

namespace logtauber {

namespace {

constexpr int kThm3Plateaus = 9;
constexpr double kThm3Limit = 1024.0;

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Summability yes(double a) { return {true, a}; }
Summability yes_unknown() { return {true, std::nullopt}; }
Summability no() { return {}; }

Truth all_limits(double a) { return {yes(a), yes(a), yes(a), yes(a)}; }

// Ratio log1p(x)/x for x = e^{-2^k}; 1 once x underflows.
double plateau_ratio(int k) {
  const double x = std::exp(-std::ldexp(1.0, k));
  if (x == 0.0) return 1.0;
  return std::log1p(x) / x;
}

// GSL loses all accuracy (and returns NaN) once sin/cos of the argument are
// meaningless; past 1e15 the neglected terms are below 1e-15.
constexpr double kTrigLimit = 1e15;

double si(double u) {
  return u > kTrigLimit ? std::numbers::pi / 2 : gsl_sf_Si(u);
}

// Ci(u) - sin(u)/u, which is O(1/u^2) for large u.
double ci_minus_sinc(double u) {
  return u > kTrigLimit ? 0.0 : gsl_sf_Ci(u) - std::sin(u) / u;
}

FuncSpec single_native(Piece piece, std::string name) {
  return FuncSpec::single(std::move(piece), 1.0, std::move(name));
}

CatalogEntry make_const(double c) {
  CatalogEntry e;
  e.name = "const(" + shortest(c) + ")";
  e.kind = EntryKind::both;
  e.function = single_native(Piece::of_constant(c), e.name);
  e.sequence = SeqSpec::of_function([c](std::int64_t) { return c; }, e.name);
  e.truth = all_limits(c);
  e.oracle.sigma = [c](double L) { return -c * std::expm1(-L); };
  e.oracle.tau = [c](double) { return c; };
  e.oracle.tau2 = [c](double) { return c; };
  e.oracle.disc_sigma = [c](std::int64_t) { return c; };
  e.oracle.disc_tau = [c](std::int64_t) { return c; };
  e.notes = "constant; every mean equals c (the continuous (C,1) mean is c(1 - 1/t))";
  return e;
}

CatalogEntry make_log_u() {
  Piece p;
  p.value = [](double u) { return std::log(u); };
  p.plain_primitive = [](double u) { return u * std::log(u) - u; };
  p.log_primitive = [](double v) { return 0.5 * v * v; };
  p.loglog_primitive = [](double v) { return v; };
  p.text = "log(u)";
  CatalogEntry e;
  e.name = "log_u";
  e.kind = EntryKind::both;
  e.function = single_native(std::move(p), e.name);
  e.sequence = SeqSpec::of_function(
      [](std::int64_t k) { return std::log(static_cast<double>(k)); }, "log(k)");
  e.oracle.sigma = [](double L) { return L - 1.0 + std::exp(-L); };
  e.oracle.tau = [](double L) { return 0.5 * L; };
  e.oracle.tau2 = [](double L) { return (L - 1.0) / std::log(L); };
  e.notes = "s(u) = log u; unbounded, tau(t) = (log t)/2";
  return e;
}

CatalogEntry make_sin_loglog() {
  Piece p;
  p.value = [](double u) { return u > 1.0 ? std::sin(std::log(std::log(u))) : 0.0; };
  p.log_primitive = [](double v) {
    if (!(v > 0.0)) return 0.0;
    const double w = std::log(v);
    return 0.5 * v * (std::sin(w) - std::cos(w));
  };
  p.loglog_primitive = [](double v) { return -std::cos(std::log(v)); };
  p.text = "sin(log(log(u)))";
  CatalogEntry e;
  e.name = "sin_loglog";
  e.function = single_native(std::move(p), e.name);
  e.truth = {no(), no(), no(), yes(0.0)};
  e.oracle.tau = [](double L) {
    const double w = std::log(L);
    return 0.5 * (std::sin(w) - std::cos(w));
  };
  e.oracle.tau2 = [](double L) {
    const double w = std::log(L);
    return (1.0 - std::cos(w)) / w;
  };
  e.notes =
      "s(u) = sin(log log u); window oscillation at most log(lambda), tau "
      "oscillates, (L,2) mean tends to 0";
  return e;
}

CatalogEntry make_c1_conv(double a) {
  Piece p;
  p.value = [a](double u) { return a + std::sin(u) / u; };
  p.plain_primitive = [a](double u) { return a * u + si(u); };
  p.log_primitive = [a](double v) {
    return a * v + ci_minus_sinc(std::exp(v));
  };
  p.text = shortest(a) + "+sin(u)/u";
  CatalogEntry e;
  e.name = "c1_conv(" + shortest(a) + ")";
  e.function = single_native(std::move(p), e.name);
  e.truth = all_limits(a);
  e.oracle.sigma = [a](double L) {
    const double t = std::exp(L);
    return (a * (t - 1.0) + si(t) - si(1.0)) / t;
  };
  e.oracle.tau = [a](double L) {
    const double t = std::exp(L);
    return a + (ci_minus_sinc(t) - ci_minus_sinc(1.0)) / L;
  };
  e.notes = "s(u) = A + sin(u)/u; ordinary limit A";
  return e;
}

CatalogEntry make_thm3() {
  CatalogEntry e;
  e.name = "thm3";
  e.function = thm3_function();
  e.truth = {no(), no(), yes(0.0), yes(0.0)};
  e.oracle.tau = [](double L) { return thm3_tau_closed_form(L); };
  e.log_abscissa = true;
  e.notes =
      "plateaus of height m e^{2^m} on [e^{2^m}, e^{2^m}+1]; (L,1) to 0, "
      "not (C,1): the unit-window averages equal m";
  return e;
}

CatalogEntry make_alt() {
  CatalogEntry e;
  e.name = "alt";
  e.kind = EntryKind::sequence;
  e.sequence = SeqSpec::of_function(
      [](std::int64_t k) { return k % 2 == 0 ? 1.0 : -1.0; }, "(-1)^k");
  e.truth = {no(), yes(0.0), yes(0.0), yes(0.0)};
  e.oracle.disc_sigma = [](std::int64_t n) {
    return n % 2 == 0 ? 0.0 : -1.0 / static_cast<double>(n);
  };
  e.notes = "s_k = (-1)^k; divergent, (C,1) and (L,1) to 0, window oscillation 2";
  return e;
}

CatalogEntry make_alt_k() {
  CatalogEntry e;
  e.name = "alt_k";
  e.kind = EntryKind::sequence;
  e.sequence = SeqSpec::of_function(
      [](std::int64_t k) {
        const auto kd = static_cast<double>(k);
        return k % 2 == 0 ? kd : -kd;
      },
      "(-1)^k*k");
  e.truth = {no(), no(), yes(0.0), yes(0.0)};
  e.oracle.disc_sigma = [](std::int64_t n) {
    if (n % 2 == 0) return 0.5;
    const std::int64_t m = (n - 1) / 2;
    return -static_cast<double>(m + 1) / static_cast<double>(n);
  };
  e.notes = "s_k = (-1)^k k; (L,1) to 0 with |tau_n| <= 1/l_n, (C,1) means oscillate";
  return e;
}

CatalogEntry make_ell() {
  CatalogEntry e;
  e.name = "ell";
  e.kind = EntryKind::sequence;
  // Prefix table of compensated harmonic numbers, grown on demand.
  struct Table {
    std::mutex mutex;
    std::vector<double> ell{0.0};
    CompensatedSum sum;
  };
  auto table = std::make_shared<Table>();
  e.sequence = SeqSpec::of_function(
      [table](std::int64_t k) {
        std::lock_guard lock(table->mutex);
        while (static_cast<std::int64_t>(table->ell.size()) <= k) {
          table->sum.add(1.0 / static_cast<double>(table->ell.size()));
          table->ell.push_back(table->sum.value());
        }
        return table->ell[static_cast<std::size_t>(k)];
      },
      "l_k");
  e.notes = "s_k = l_k, the harmonic numbers; unbounded";
  return e;
}

CatalogEntry make_integrand_ok() {
  Piece zero = Piece::of_constant(0.0);
  Piece tail = Piece::of_expr(Expr::parse("sin(u)/(u*log(u))", Var::u));
  std::vector<Segment> segs;
  segs.push_back({LogPoint{}, std::move(zero)});
  segs.push_back({LogPoint{1.0, 0.0}, std::move(tail)});
  FuncSpec f(std::move(segs), "sin(x)/(x log x) on [e, inf)");

  CatalogEntry e;
  e.name = "integrand_ok";
  e.integrand = f;
  e.function = integral_mode(f);
  e.truth = {yes_unknown(), yes_unknown(), yes_unknown(), yes_unknown()};
  e.notes =
      "s(u) = integral of f(x) = sin(x)/(x log x) over [e, u]; x log x |f(x)| "
      "<= 1, convergent";
  return e;
}

struct ParsedName {
  std::string base;
  std::optional<double> arg;
};

ParsedName parse_name(std::string_view name) {
  ParsedName out;
  const auto open = name.find('(');
  if (open == std::string_view::npos) {
    out.base = std::string(name);
    return out;
  }
  if (name.back() != ')') {
    throw InvalidArgument("malformed catalog name: " + std::string(name));
  }
  out.base = std::string(name.substr(0, open));
  const std::string_view inner = name.substr(open + 1, name.size() - open - 2);
  double v = 0.0;
  const auto res = std::from_chars(inner.data(), inner.data() + inner.size(), v);
  if (res.ec != std::errc{} || res.ptr != inner.data() + inner.size() ||
      !std::isfinite(v)) {
    throw InvalidArgument("malformed catalog argument: " + std::string(name));
  }
  out.arg = v;
  return out;
}

std::string describe(const Summability& s) {
  if (!s.summable) return "no";
  return s.limit ? "yes(" + shortest(*s.limit) + ")" : "yes";
}

}  // namespace

std::string_view to_string(EntryKind kind) noexcept {
  switch (kind) {
    case EntryKind::function:
      return "function";
    case EntryKind::sequence:
      return "sequence";
    case EntryKind::both:
      return "function+sequence";
  }
  return "?";
}

Spec CatalogEntry::spec() const {
  if (function) return *function;
  return *sequence;
}

std::string describe(const Truth& t) {
  return "ordinary=" + describe(t.ordinary) + " c1=" + describe(t.c1) +
         " l1=" + describe(t.l1) + " l2=" + describe(t.l2);
}

CatalogEntry catalog_get(std::string_view name) {
  const ParsedName p = parse_name(name);
  const auto no_arg = [&] {
    if (p.arg) throw InvalidArgument(p.base + " takes no argument");
  };
  if (p.base == "const") {
    if (!p.arg) throw InvalidArgument("const needs a value, e.g. const(5)");
    return make_const(*p.arg);
  }
  if (p.base == "c1_conv") return make_c1_conv(p.arg.value_or(1.0));
  if (p.base == "log_u") return no_arg(), make_log_u();
  if (p.base == "sin_loglog") return no_arg(), make_sin_loglog();
  if (p.base == "thm3") return no_arg(), make_thm3();
  if (p.base == "alt") return no_arg(), make_alt();
  if (p.base == "alt_k") return no_arg(), make_alt_k();
  if (p.base == "ell") return no_arg(), make_ell();
  if (p.base == "integrand_ok") return no_arg(), make_integrand_ok();
  throw InvalidArgument("unknown catalog entry: " + std::string(name));
}

std::vector<CatalogListing> catalog_list() {
  std::vector<CatalogListing> out;
  const auto add = [&](std::string shown, const CatalogEntry& e) {
    out.push_back({std::move(shown), e.kind, describe(e.truth), e.notes});
  };
  {
    CatalogEntry e = make_const(0.0);
    e.truth = {yes_unknown(), yes_unknown(), yes_unknown(), yes_unknown()};
    CatalogListing row{"const(c)", e.kind, "ordinary=yes(c) c1=yes(c) l1=yes(c) l2=yes(c)",
                       e.notes};
    out.push_back(std::move(row));
  }
  add("log_u", make_log_u());
  add("sin_loglog", make_sin_loglog());
  add("thm3", make_thm3());
  add("alt", make_alt());
  add("alt_k", make_alt_k());
  {
    const CatalogEntry e = make_c1_conv(1.0);
    out.push_back({"c1_conv(A)", e.kind, "ordinary=yes(A) c1=yes(A) l1=yes(A) l2=yes(A)",
                   e.notes});
  }
  add("integrand_ok", make_integrand_ok());
  add("ell", make_ell());
  return out;
}

double thm3_plateau_width(int m) {
  if (m < 1) throw InvalidArgument("plateau index must be >= 1");
  return std::log1p(std::exp(-std::ldexp(1.0, m)));
}

double thm3_value(double u) {
  if (!(u >= 1.0)) throw InvalidArgument("thm3_value needs u >= 1");
  const double v = std::log(u);
  for (int m = 1;; ++m) {
    const double start = std::ldexp(1.0, m);
    if (v < start) return 0.0;
    if (v - start <= thm3_plateau_width(m)) {
      return static_cast<double>(m) * std::exp(start);
    }
  }
}

double thm3_log_value(const LogPoint& log_u) {
  const double v = log_u.value();
  if (!(v >= 0.0)) throw InvalidArgument("thm3_log_value needs u >= 1");
  for (int m = 1; m < 1024; ++m) {
    const LogPoint start{std::ldexp(1.0, m), 0.0};
    const double d = log_distance(start, log_u);
    if (d < 0.0) break;
    if (d <= thm3_plateau_width(m)) {
      return std::log(static_cast<double>(m)) + start.base;
    }
  }
  return -std::numeric_limits<double>::infinity();
}

double thm3_tau_closed_form(const LogPoint& log_t) {
  const double L = log_t.value();
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw InvalidArgument("thm3_tau_closed_form needs 0 < log t < inf");
  }
  double mass = 0.0;
  for (int k = 1; k < 1024; ++k) {
    const LogPoint start{std::ldexp(1.0, k), 0.0};
    const double d = log_distance(start, log_t);
    if (!(d > 0.0)) break;
    const double w = thm3_plateau_width(k);
    if (d >= w) {
      mass += k * plateau_ratio(k);
    } else {
      // Partial plateau: k e^{2^k} d, formed in log space.
      mass += k * std::exp(start.base + std::log(d));
    }
  }
  return mass / L;
}

double thm3_tau_closed_form(double log_t) {
  return thm3_tau_closed_form(LogPoint{log_t, 0.0});
}

double thm3_tau_plateau_end(int m) {
  if (m < 1) throw InvalidArgument("plateau index must be >= 1");
  double mass = 0.0;
  for (int k = 1; k <= m; ++k) mass += k * plateau_ratio(k);
  return mass / (std::ldexp(1.0, m) + thm3_plateau_width(m));
}

double thm3_sigma_spike(int m) {
  if (m < 1) throw InvalidArgument("thm3_sigma_spike needs m >= 1");
  // Height m e^{2^m} over unit width, divided by t = e^{2^m}.
  const double log_height_over_t = std::ldexp(1.0, m) - std::ldexp(1.0, m);
  return static_cast<double>(m) * std::exp(log_height_over_t);
}

double thm3_block_bound(int m) {
  if (m < 1) throw InvalidArgument("block index must be >= 1");
  return static_cast<double>(m) * (m - 1) / std::ldexp(1.0, m);
}

int thm3_block(double log_t) {
  if (!(log_t >= 1.0) || !std::isfinite(log_t)) {
    throw InvalidArgument("thm3_block needs log t >= 1");
  }
  return std::ilogb(log_t) + 1;
}

FuncSpec thm3_function() {
  std::vector<Segment> segs;
  segs.push_back({LogPoint{}, Piece::of_constant(0.0)});
  for (int m = 1; m <= kThm3Plateaus; ++m) {
    const double start = std::ldexp(1.0, m);
    segs.push_back({LogPoint{start, 0.0},
                    Piece::of_constant(static_cast<double>(m) * std::exp(start))});
    segs.push_back({LogPoint{start, thm3_plateau_width(m)}, Piece::of_constant(0.0)});
  }
  Piece guard;
  guard.value = [](double) -> double {
    throw DomainError(DomainErrorKind::outside_domain,
                      "thm3 segment form covers log u < 1024 only");
  };
  guard.text = "undefined";
  segs.push_back({LogPoint{kThm3Limit, 0.0}, std::move(guard)});
  return FuncSpec(std::move(segs), "thm3");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string num(double x) {
  const std::string s = shortest(x);
  return x < 0.0 ? "(" + s + ")" : s;
}

}  // namespace

SeqSpec random_sequence(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> freq(0.1, 3.0);
  std::uniform_real_distribution<double> power(-1.0, 0.5);
  const int family = static_cast<int>(rng() % 5);
  // Parameters are drawn in a fixed order before any text is assembled.
  const double a = coef(rng);
  const double b = coef(rng);
  const double c = freq(rng);
  const double p = power(rng);
  const std::uint64_t key = rng();
  switch (family) {
    case 0:
      return SeqSpec::of_expr(num(a) + "*(-1)^k+" + num(b));
    case 1:
      return SeqSpec::of_expr(num(a) + "*sin(" + num(c) + "*k)+" + num(b) + "*log(k)");
    case 2:
      return SeqSpec::of_expr(num(a) + "*k^" + num(p));
    case 3:
      return SeqSpec::of_expr(num(a) + "*cos(" + num(c) + "*log(k))");
    default: {
      const double scale = std::fabs(a) + 0.1;
      return SeqSpec::of_function(
          [scale, key](std::int64_t k) {
            const std::uint64_t h = splitmix64(key ^ static_cast<std::uint64_t>(k));
            // Top 53 bits to [-1, 1).
            return scale * (static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0);
          },
          "noise(" + shortest(scale) + ",key=" + std::to_string(key) + ")");
    }
  }
}

std::string random_expression(std::uint64_t seed, Var var) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> freq(0.1, 3.0);
  std::uniform_real_distribution<double> power(-1.0, 0.5);
  const std::string x(1, static_cast<char>(var));
  const int families = var == Var::u ? 5 : 4;
  const int family = static_cast<int>(rng() % families);
  const double a = coef(rng);
  const double b = coef(rng);
  const double c = freq(rng);
  const double p = power(rng);
  switch (family) {
    case 0:
      return num(a) + "*sin(" + num(c) + "*log(" + x + "))+" + num(b);
    case 1:
      return num(a) + "*log(" + x + ")+" + num(b);
    case 2:
      return num(a) + "*" + x + "^" + num(p);
    case 3:
      return var == Var::u ? num(a) + "+" + num(b) + "*sin(" + x + ")/" + x
                           : num(a) + "*(-1)^" + x + "+" + num(b);
    default:
      return num(a) + "*cos(" + num(c) + "*log(1+log(" + x + ")))";
  }
}

}  // namespace logtauber
