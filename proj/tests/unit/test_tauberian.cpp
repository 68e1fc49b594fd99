#include <cmath>
#include <numbers>

#include "doctest.h"
#include "logtauber/catalog.hpp"
#include "logtauber/errors.hpp"
#include "logtauber/means.hpp"
#include "logtauber/tauberian.hpp"

using namespace logtauber;

namespace {

const double kE = std::numbers::e;

// Direct rational-style sum in long double for the discrete windows.
long double brute_upper(const std::function<long double(long)>& s, long n, long last) {
  long double h = 0.0L, acc = 0.0L;
  for (long k = 1; k <= n; ++k) h += 1.0L / k;
  for (long k = n + 1; k <= last; ++k) acc += (s(k) - s(n)) / k;
  return acc / ((last - n) * h);
}

long double brute_lower(const std::function<long double(long)>& s, long n, long first) {
  long double h = 0.0L, acc = 0.0L;
  for (long k = 1; k <= n; ++k) h += 1.0L / k;
  for (long k = first; k <= n; ++k) acc += (s(n) - s(k)) / k;
  return acc / ((n - first + 1) * h);
}

}  // namespace

TEST_CASE("discrete windows") {
  CHECK(DiscreteWindow::floor_power(10, 1.1) == 12);
  CHECK(DiscreteWindow::floor_power(10, 0.5) == 3);
  CHECK(DiscreteWindow::floor_power(4, 0.5) == 2);
  CHECK(DiscreteWindow::floor_power(100, 1.5) == 1000);
  CHECK(DiscreteWindow::floor_power(9, 0.5) == 3);

  const DiscreteWindow up = DiscreteWindow::of(10, 1.1);
  CHECK(up.first() == 11);
  CHECK(up.last() == 12);
  const DiscreteWindow lo = DiscreteWindow::of(10, 0.5);
  CHECK(lo.first() == 4);
  CHECK(lo.last() == 10);
  CHECK(DiscreteWindow::of(2, 1.01).empty());
}

TEST_CASE("both window descriptions coincide") {
  for (std::int64_t n : {2, 3, 10, 99, 100, 1000, 4096, 12345}) {
    for (double lam : {0.5, 0.9, 0.95, 1.05, 1.1, 1.5, 2.0}) {
      CAPTURE(n);
      CAPTURE(lam);
      const DiscreteWindow a = DiscreteWindow::of(n, lam);
      const DiscreteWindow b = DiscreteWindow::by_log_ratio(n, lam);
      CHECK(a.first() == b.first());
      CHECK(a.last() == b.last());
    }
  }
  const SeqSpec s = SeqSpec::of_expr("sin(k) * log(k)");
  for (std::int64_t n : {10, 77, 1000}) {
    const auto direct = slow_decrease_margin(s, n, 1.3);
    const auto redundant = slow_decrease_margin(s, DiscreteWindow::by_log_ratio(n, 1.3));
    REQUIRE(direct.has_value());
    REQUIRE(redundant.has_value());
    CHECK(*direct == *redundant);
  }
}

TEST_CASE("continuous upper window") {
  CHECK(window_avg_upper(FuncSpec::of_expr("3"), 50.0, 1.5).value.real() == 0.0);
  CHECK(window_avg_upper(FuncSpec::of_expr("log(u)"), kE * kE, 1.5).value.real() ==
        doctest::Approx(0.5).epsilon(1e-10));

  const FuncSpec sll = *catalog_get("sin_loglog").function;
  const WindowAvg w = window_avg_upper(sll, 1e6, 1.05);
  const auto mod = slow_osc_modulus(sll, 1e6, 1.05);
  REQUIRE(mod.has_value());
  CHECK(std::fabs(w.value.real()) <= *mod);
  CHECK(*mod <= std::log(1.05) + 1e-12);
}

TEST_CASE("continuous upper window past the double range") {
  const WindowAvg w = window_avg_upper(*catalog_get("log_u").function, LogPoint{600.0, 0.0}, 2.0);
  CHECK(w.value.real() == doctest::Approx(300.0).epsilon(1e-10));
}

TEST_CASE("continuous lower window") {
  CHECK(window_avg_lower(FuncSpec::of_expr("3"), 50.0, 0.5).value.real() == 0.0);
  CHECK(window_avg_lower(FuncSpec::of_expr("log(u)"), kE * kE, 0.5).value.real() ==
        doctest::Approx(0.5).epsilon(1e-10));
  CHECK(window_avg_lower(FuncSpec::of_expr("-log(u)"), kE * kE, 0.5).value.real() ==
        doctest::Approx(-0.5).epsilon(1e-10));
  CHECK_THROWS_AS((void)window_avg_lower(FuncSpec::of_expr("1"), 10.0, 1.5), InvalidArgument);
  CHECK_THROWS_AS((void)window_avg_upper(FuncSpec::of_expr("1"), 10.0, 0.5), InvalidArgument);
}

TEST_CASE("discrete upper window") {
  CHECK(disc_window_upper(SeqSpec::of_expr("2"), 10, 1.5).value.real() == 0.0);
  const WindowAvg alt = disc_window_upper(SeqSpec::of_expr("(-1)^k"), 10, 1.1);
  const double l10 = 7381.0 / 2520.0;
  CHECK(alt.value.real() == doctest::Approx((-2.0 / 11.0) / (2.0 * l10)).epsilon(1e-14));
  CHECK(alt.value.real() == doctest::Approx(-0.03104).epsilon(1e-4));
  CHECK(disc_window_upper(SeqSpec::of_expr("k"), 10, 1.1).value.real() > 0.0);

  const auto sk = [](long k) { return std::sin(static_cast<long double>(k)) * k; };
  const WindowAvg big = disc_window_upper(SeqSpec::of_expr("sin(k)*k"), 300, 1.4);
  const long last = DiscreteWindow::floor_power(300, 1.4);
  CHECK(big.value.real() == doctest::Approx(static_cast<double>(brute_upper(sk, 300, last))).epsilon(1e-12));

  const WindowAvg empty = disc_window_upper(SeqSpec::of_expr("k"), 2, 1.01);
  CHECK(empty.empty);
}

TEST_CASE("discrete lower window") {
  CHECK(disc_window_lower(SeqSpec::of_expr("2"), 10, 0.5).value.real() == 0.0);
  const auto id = [](long k) { return static_cast<long double>(k); };
  CHECK(disc_window_lower(SeqSpec::of_expr("k"), 10, 0.5).value.real() ==
        doctest::Approx(static_cast<double>(brute_lower(id, 10, 4))).epsilon(1e-14));
  CHECK(disc_window_lower(SeqSpec::of_expr("(-1)^k"), 4, 0.5).value.real() ==
        doctest::Approx(4.0 / 25.0).epsilon(1e-15));
}

TEST_CASE("harmonic-mass normalization") {
  const WindowAvg w = disc_window_upper(SeqSpec::of_expr("(-1)^k"), 10, 1.1);
  const double mass = 1.0 / 11 + 1.0 / 12;
  CHECK(w.measure_normalized.real() == doctest::Approx((-2.0 / 11.0) / mass).epsilon(1e-14));
  CHECK(w.sum.real() == doctest::Approx(-2.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("slow decrease margins") {
  const SeqSpec logk = SeqSpec::of_expr("log(k)");
  for (std::int64_t n : {2, 10, 1000}) {
    for (double lam : {1.05, 1.5, 2.0}) {
      const auto m = slow_decrease_margin(logk, n, lam);
      if (m) CHECK(*m >= 0.0);
    }
  }
  const SeqSpec alt = SeqSpec::of_expr("(-1)^k");
  CHECK(*slow_decrease_margin(alt, 10, 1.1) == -2.0);
  CHECK(*slow_decrease_margin(SeqSpec::of_expr("5"), 10, 1.1) == 0.0);
  CHECK_FALSE(slow_decrease_margin(alt, 2, 1.01).has_value());

  const FuncSpec sll = *catalog_get("sin_loglog").function;
  CHECK(*slow_decrease_margin(sll, 1e6, 1.05) >= -std::log(1.05));
}

TEST_CASE("slow oscillation moduli") {
  CHECK(*slow_osc_modulus(SeqSpec::of_expr("5"), 10, 1.5) == 0.0);
  CHECK(*slow_osc_modulus(SeqSpec::of_expr("(-1)^k"), 10, 1.1) == 2.0);
  const FuncSpec sll = *catalog_get("sin_loglog").function;
  for (double t : {10.0, 1e3, 1e8}) {
    for (double lam : {1.01, 1.1, 2.0}) {
      CHECK(*slow_osc_modulus(sll, t, lam) <= std::log(lam) + 1e-12);
    }
  }
  const SeqSpec z = SeqSpec::of_expr("0").with_imag(SeqSpec::of_expr("(-1)^k"));
  CHECK(*slow_osc_modulus(z, 10, 1.1) == 2.0);
}

TEST_CASE("probes include every breakpoint in the window") {
  const FuncSpec f = FuncSpec::piecewise({{1.0, "0"}, {std::exp(2.5), "1"}, {std::exp(2.75), "0"}});
  const auto probes = window_probes(f, LogPoint{2.0, 0.0}, 1.5);
  bool hit_a = false, hit_b = false;
  for (const auto& p : probes) {
    if (std::fabs(p.value() - 2.5) < 1e-12) hit_a = true;
    if (std::fabs(p.value() - 2.75) < 1e-12) hit_b = true;
    CHECK(p.value() > 2.0);
    CHECK(p.value() <= 3.0 + 1e-12);
  }
  CHECK(hit_a);
  CHECK(hit_b);
  CHECK(*slow_osc_modulus(f, std::exp(2.0), 1.5) == 1.0);
}

TEST_CASE("shift invariance") {
  const FuncSpec f = FuncSpec::of_expr("sin(u)/u + log(log(u))", 1.0);
  const FuncSpec g = FuncSpec::of_expr("sin(u)/u + log(log(u)) + 17", 1.0);
  for (double t : {10.0, 1000.0}) {
    CHECK(window_avg_upper(f, t, 1.5).value.real() ==
          doctest::Approx(window_avg_upper(g, t, 1.5).value.real()).epsilon(1e-12).scale(1.0));
    CHECK(window_avg_lower(f, t, 0.5).value.real() ==
          doctest::Approx(window_avg_lower(g, t, 0.5).value.real()).epsilon(1e-12).scale(1.0));
    CHECK(*slow_osc_modulus(f, t, 1.5) == doctest::Approx(*slow_osc_modulus(g, t, 1.5)).epsilon(1e-12).scale(1.0));
  }
  const SeqSpec a = SeqSpec::of_expr("sin(k)");
  const SeqSpec b = SeqSpec::of_expr("sin(k) - 3");
  CHECK(disc_window_upper(a, 100, 1.3).value.real() ==
        doctest::Approx(disc_window_upper(b, 100, 1.3).value.real()).epsilon(1e-12).scale(1.0));
  CHECK(*slow_decrease_margin(a, 100, 1.3) == doctest::Approx(*slow_decrease_margin(b, 100, 1.3)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("scaling covariance") {
  const FuncSpec f = FuncSpec::of_expr("cos(log(u))");
  const FuncSpec g = FuncSpec::of_expr("-2.5*cos(log(u))");
  const double t = 200.0;
  CHECK(std::fabs(window_avg_upper(g, t, 1.25).value.real()) ==
        doctest::Approx(2.5 * std::fabs(window_avg_upper(f, t, 1.25).value.real())).epsilon(1e-10));
  CHECK(*slow_osc_modulus(g, t, 1.25) == doctest::Approx(2.5 * *slow_osc_modulus(f, t, 1.25)).epsilon(1e-12));
  const SeqSpec a = SeqSpec::of_expr("(-1)^k * log(k)");
  const SeqSpec b = SeqSpec::of_expr("4 * (-1)^k * log(k)");
  CHECK(disc_window_lower(b, 500, 0.7).value.real() ==
        doctest::Approx(4.0 * disc_window_lower(a, 500, 0.7).value.real()).epsilon(1e-12));
}

TEST_CASE("window averages are bounded by the window modulus") {
  for (const char* name : {"const(2)", "log_u", "sin_loglog", "c1_conv(1)"}) {
    const FuncSpec f = *catalog_get(name).function;
    for (double t : {10.0, 1e3, 1e5}) {
      for (double lam : {1.01, 1.1, 1.5, 2.0}) {
        CAPTURE(name);
        CAPTURE(t);
        CAPTURE(lam);
        const WindowAvg w = window_avg_upper(f, t, lam);
        CHECK(std::abs(w.value) <= *slow_osc_modulus(f, t, lam) + 1e-9);
      }
    }
  }
  for (const char* name : {"alt", "alt_k", "ell"}) {
    const SeqSpec s = *catalog_get(name).sequence;
    for (std::int64_t n : {10, 100, 1000}) {
      const WindowAvg w = disc_window_upper(s, n, 1.5);
      CHECK(std::abs(w.measure_normalized) <= *slow_osc_modulus(s, n, 1.5) + 1e-12);
    }
  }
}

TEST_CASE("integrand conditions") {
  const std::vector<double> xs = {3.0, 10.0, 100.0, 1e4, 1e6};
  const auto a = integrand_conditions(FuncSpec::of_expr("1/(u*log(u))", 2.0), 2.0, xs, 1.0);
  CHECK(a.min_weighted == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.max_abs_weighted == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.two_sided_holds);
  CHECK(a.one_sided_holds);

  for (double c : {1.0, 5.0, 10.0}) {
    const auto b = integrand_conditions(FuncSpec::of_expr("1/u"), 2.0, xs, c);
    CHECK_FALSE(b.two_sided_holds);
    CHECK(b.max_abs_weighted == doctest::Approx(std::log(1e6)).epsilon(1e-14));
  }

  const auto c = integrand_conditions(FuncSpec::of_expr("sin(u)/(u*log(u))", 2.0), 2.0, xs, 1.0);
  CHECK(c.max_abs_weighted <= 1.0);
  CHECK(c.two_sided_holds);
}

TEST_CASE("constant profile is identically zero") {
  const TauberianReport r = condition_profile(Spec{FuncSpec::of_expr("4")}, Grid::explicit_points({10, 100, 1000, 1e4}));
  for (const auto* rows : {&r.upper, &r.lower}) {
    for (const auto& row : *rows) {
      for (const auto& cell : row.cells) CHECK(cell.value.real() == 0.0);
      REQUIRE(row.tail_inf.has_value());
      CHECK(*row.tail_inf == 0.0);
    }
  }
  for (const auto& row : r.so_modulus) CHECK(*row.tail_sup == 0.0);
  CHECK(r.tail == 1);
}

TEST_CASE("log u profile") {
  const Grid g = Grid::explicit_points({10, 100, 1000, 1e4});
  ProfileOptions opt;
  opt.tail = 2;
  const TauberianReport r = condition_profile(Spec{FuncSpec::of_expr("log(u)")}, g, opt);
  REQUIRE(r.upper.size() == opt.lambdas_upper.size());
  for (const auto& row : r.upper) {
    REQUIRE(row.cells.size() == g.size());
    for (const auto& cell : row.cells) {
      CHECK(cell.value.real() == doctest::Approx((row.lambda - 1) * std::log(cell.abscissa) / 2).epsilon(1e-9));
    }
    CHECK(*row.tail_inf == doctest::Approx((row.lambda - 1) * std::log(1000.0) / 2).epsilon(1e-9));
  }
  bool found = false;
  for (const auto& trend : r.verdict) {
    if (trend.condition != "upper_window_inf") continue;
    found = true;
    for (const auto& e : trend.entries) CHECK(*e.aggregate >= 0.0);
  }
  CHECK(found);
}

TEST_CASE("alternating sequence keeps a window proxy away from zero") {
  // λ = 2 would need 10^10 terms at n = 10^5.
  const Grid g = Grid::decades(10, 1e5);
  ProfileOptions opt;
  opt.lambdas_upper = {1.5, 1.25, 1.1, 1.05, 1.01};
  opt.lambdas_lower = {1 / 1.5, 1 / 1.25, 1 / 1.1, 1 / 1.05, 1 / 1.01};
  const TauberianReport r = condition_profile(Spec{SeqSpec::of_expr("(-1)^k")}, g, opt);
  CHECK(r.discrete);
  for (const auto& row : r.upper) {
    if (!row.tail_sup_abs) continue;
    CHECK(*row.tail_sup_abs >= 0.5);
  }
  for (const auto& row : r.so_modulus) {
    for (const auto& cell : row.cells) {
      if (cell) CHECK(*cell == 2.0);
    }
  }
  const auto again = derive_verdict(r);
  REQUIRE(again.size() == r.verdict.size());
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].summary == r.verdict[i].summary);
}
