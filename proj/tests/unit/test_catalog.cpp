#include <cmath>
#include <set>

#include "doctest.h"
#include "logtauber/catalog.hpp"
#include "logtauber/errors.hpp"
#include "logtauber/means.hpp"

using namespace logtauber;

namespace {

// Value-only copy: no primitives, so means go through plain quadrature.
FuncSpec opaque(const FuncSpec& f) {
  std::vector<Segment> segs;
  for (const Segment& s : f.segments()) {
    Piece p;
    p.value = s.body.value;
    p.text = "opaque:" + s.body.text;
    segs.push_back({s.start, p});
  }
  return FuncSpec(std::move(segs), "opaque");
}

// τ straight from the plateau masses: Σ_k k e^{2^k} · width_k, with the
// partial plateau clipped at log t.
long double thm3_tau_oracle(long double log_t) {
  long double mass = 0.0L;
  for (int k = 1; k < 12; ++k) {
    const long double a = std::ldexp(1.0L, k);
    if (a >= log_t) break;
    const long double width = std::log1p(std::exp(-a));
    // ∫_{e^a}^{e^top} k e^a / u du
    mass += k * std::exp(a) * std::min(width, log_t - a);
  }
  return mass / log_t;
}

}  // namespace

TEST_CASE("lookup") {
  CHECK(catalog_get("const(5)").truth.ordinary.limit == 5.0);
  CHECK(catalog_get("c1_conv").name == "c1_conv(1)");
  CHECK(catalog_get("c1_conv(2.5)").name == "c1_conv(2.5)");
  CHECK_THROWS_AS(catalog_get("nope"), InvalidArgument);
  CHECK_THROWS_AS(catalog_get("const"), InvalidArgument);
  CHECK_THROWS_AS(catalog_get("const(x)"), InvalidArgument);
  CHECK_THROWS_AS(catalog_get("thm3(2)"), InvalidArgument);
  CHECK_THROWS_AS(catalog_get("const(5"), InvalidArgument);
}

TEST_CASE("listing") {
  const auto rows = catalog_list();
  std::set<std::string> names;
  for (const auto& r : rows) names.insert(r.name);
  for (const char* n : {"const(c)", "log_u", "sin_loglog", "thm3", "alt", "alt_k", "c1_conv(A)", "integrand_ok", "ell"}) {
    CHECK(names.count(n) == 1);
  }
}

TEST_CASE("truth records") {
  const Truth c5 = catalog_get("const(5)").truth;
  for (const Summability& s : {c5.ordinary, c5.c1, c5.l1, c5.l2}) {
    CHECK(s.summable);
    CHECK(s.limit == 5.0);
  }
  for (const char* name : {"thm3", "alt_k"}) {
    const Truth t = catalog_get(name).truth;
    CHECK_FALSE(t.c1.summable);
    CHECK(t.l1.summable);
    CHECK(t.l1.limit == 0.0);
  }
  CHECK(describe(c5) == "ordinary=yes(5) c1=yes(5) l1=yes(5) l2=yes(5)");
}

TEST_CASE("plateau function values") {
  CHECK(thm3_value(10.0) == 0.0);
  CHECK(thm3_value(std::exp(4.0) + 0.5) == doctest::Approx(2.0 * std::exp(4.0)).epsilon(1e-12));
  CHECK(thm3_value(std::exp(4.0) + 0.5) == doctest::Approx(109.1963).epsilon(1e-6));
  CHECK(thm3_value(std::exp(4.0) + 1.5) == 0.0);
  CHECK(thm3_log_value(LogPoint{256.0, 0.0}) == doctest::Approx(std::log(8.0) + 256.0).epsilon(1e-15));
  CHECK(thm3_plateau_width(2) == doctest::Approx(std::log1p(std::exp(-4.0))).epsilon(1e-15));
  CHECK(thm3_plateau_width(11) == 0.0);
  CHECK_THROWS_AS((void)thm3_function().eval_log(LogPoint{1100.0, 0.0}), DomainError);
}

TEST_CASE("plateau closed form") {
  CHECK(thm3_tau_closed_form(1.5) == 0.0);
  for (double L : {2.5, 4.0, 5.0, 8.0, 8.0001, 16.0, 40.0}) {
    CAPTURE(L);
    CHECK(thm3_tau_closed_form(L) == doctest::Approx(static_cast<double>(thm3_tau_oracle(L))).epsilon(1e-12));
  }
  // log t = 8 is where plateau 3 begins: only plateaus 1 and 2 count.
  CHECK(thm3_tau_closed_form(8.0) == doctest::Approx((0.93803 + 1.98186) / 8).epsilon(1e-5));
  CHECK(thm3_tau_plateau_end(3) == doctest::Approx(0.73992).epsilon(1e-4));
  CHECK(thm3_tau_closed_form(std::ldexp(1.0, 20)) <= 20.0 * 21.0 / std::ldexp(1.0, 21));
  CHECK(thm3_tau_closed_form(std::ldexp(1.0, 20)) <= 2.01e-4);
  CHECK(thm3_tau_closed_form(LogPoint{8.0, 0.5 * thm3_plateau_width(3)}) >
        thm3_tau_closed_form(8.0));
}

TEST_CASE("plateau spikes and bounds") {
  for (int m = 1; m <= 40; ++m) CHECK(thm3_sigma_spike(m) == static_cast<double>(m));
  CHECK(thm3_block_bound(3) == 0.75);
  CHECK(thm3_block_bound(21) == doctest::Approx(420.0 / 2097152.0).epsilon(1e-15));
  CHECK(thm3_block(1.0) == 1);
  CHECK(thm3_block(4.0) == 3);
  CHECK(thm3_block(7.99) == 3);
}

TEST_CASE("function oracles agree with value-only quadrature") {
  for (const char* name : {"const(3)", "log_u", "sin_loglog", "c1_conv(1)", "c1_conv(-2)"}) {
    const CatalogEntry e = catalog_get(name);
    const FuncSpec f = opaque(*e.function);
    for (double t : {10.0, 1e3, 1e5}) {
      CAPTURE(name);
      CAPTURE(t);
      const double L = std::log(t);
      if (e.oracle.sigma)
        CHECK(cont_c1(f, t).value.real() == doctest::Approx(e.oracle.sigma(L)).epsilon(1e-8));
      if (e.oracle.tau)
        CHECK(cont_l1(f, t).value.real() == doctest::Approx(e.oracle.tau(L)).epsilon(1e-8));
      if (e.oracle.tau2)
        CHECK(cont_l2(f, t).value.real() == doctest::Approx(e.oracle.tau2(L)).epsilon(1e-8));
    }
  }
}

TEST_CASE("sequence oracles agree with direct sums") {
  for (const char* name : {"alt", "alt_k", "const(-1.5)"}) {
    const CatalogEntry e = catalog_get(name);
    for (std::int64_t n : {1, 2, 9, 10, 1001}) {
      long double acc = 0.0L;
      for (std::int64_t k = 1; k <= n; ++k) acc += e.sequence->term(k);
      CHECK(static_cast<double>(acc / n) == doctest::Approx(e.oracle.disc_sigma(n)).epsilon(1e-14));
      CHECK(disc_c1(*e.sequence, n).value.real() == doctest::Approx(e.oracle.disc_sigma(n)).epsilon(1e-14));
    }
  }
  const SeqSpec ell = *catalog_get("ell").sequence;
  CHECK(ell.term(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-16));
}

TEST_CASE("truth flags match the means at large abscissae") {
  // Summable entries: the mean sits near its limit far out.
  const auto near = [](double got, double want, double tol) { return std::fabs(got - want) <= tol; };
  {
    const CatalogEntry c = catalog_get("c1_conv(1)");
    CHECK(near(cont_c1(*c.function, 1e8).value.real(), 1.0, 1e-7));
    CHECK(near(cont_l1(*c.function, LogPoint{690.0, 0.0}).value.real(), 1.0, 2e-3));
    CHECK(near(cont_l2(*c.function, LogPoint{690.0, 0.0}).value.real(), 1.0, 0.1));
  }
  {
    const CatalogEntry s = catalog_get("sin_loglog");
    CHECK(near(cont_l2(*s.function, LogPoint{1e200, 0.0}).value.real(), 0.0, 0.01));
    // τ keeps oscillating with amplitude 1/√2.
    double lo = 1, hi = -1;
    for (double L = 10; L < 1e12; L *= 3) {
      const double v = cont_l1(*s.function, LogPoint{L, 0.0}).value.real();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi - lo > 1.0);
  }
  {
    const CatalogEntry t = catalog_get("thm3");
    CHECK(cont_l1(*t.function, LogPoint{1000.0, 0.0}).value.real() <= thm3_block_bound(10));
  }
  {
    const SeqSpec alt = *catalog_get("alt").sequence;
    CHECK(near(disc_c1(alt, 1000001).value.real(), 0.0, 1e-5));
    CHECK(near(disc_l1(alt, 1000000).value.real(), 0.0, 0.1));
    const SeqSpec altk = *catalog_get("alt_k").sequence;
    CHECK(std::fabs(disc_c1(altk, 1000000).value.real() - disc_c1(altk, 1000001).value.real()) > 0.9);
    CHECK(near(disc_l1(altk, 1000000).value.real(), 0.0, 0.1));
  }
  {
    const FuncSpec lu = *catalog_get("log_u").function;
    CHECK(cont_l1(lu, 1e8).value.real() > cont_l1(lu, 1e4).value.real() + 4.0);
  }
}

TEST_CASE("integrand entry") {
  const CatalogEntry e = catalog_get("integrand_ok");
  REQUIRE(e.integrand.has_value());
  REQUIRE(e.function.has_value());
  CHECK(e.function->eval(2.0) == 0.0);
  CHECK(std::fabs(e.function->eval(1e4)) < 1.0);
}

TEST_CASE("seeded generators are deterministic") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
    const SeqSpec a = random_sequence(seed);
    const SeqSpec b = random_sequence(seed);
    CHECK(a.describe() == b.describe());
    for (std::int64_t k : {1, 2, 3, 100, 9999}) CHECK(a.term(k) == b.term(k));
    CHECK(random_expression(seed, Var::u) == random_expression(seed, Var::u));
    CHECK_NOTHROW(Expr::parse(random_expression(seed, Var::k), Var::k));
    CHECK_NOTHROW(Expr::parse(random_expression(seed, Var::u), Var::u));
  }
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < 50; ++seed) distinct.insert(random_sequence(seed).describe());
  CHECK(distinct.size() > 40);
}
