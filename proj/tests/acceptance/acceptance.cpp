// One line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expr_corpus.hpp"
#include "logtauber/catalog.hpp"
#include "logtauber/errors.hpp"
#include "logtauber/expr.hpp"
#include "logtauber/identities.hpp"
#include "logtauber/means.hpp"
#include "logtauber/parallel.hpp"
#include "logtauber/tauberian.hpp"

using namespace logtauber;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Largest value under a mutex; parallel bodies report into it.
struct MaxTracker {
  std::mutex m;
  double value = 0.0;
  void offer(double x) {
    std::lock_guard lock(m);
    value = std::max(value, x);
  }
};

Outcome lemma2_random_triples() {
  struct Triple {
    std::uint64_t seed;
    std::int64_t n;
    double lambda;
  };
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> log_n(std::log(2.0), std::log(1e4));
  std::uniform_real_distribution<double> side(0.0, 1.0);
  std::uniform_real_distribution<double> up(1.05, 2.0);
  std::uniform_real_distribution<double> down(0.5, 0.95);
  std::vector<Triple> triples;
  while (triples.size() < 200) {
    const std::uint64_t seed = rng();
    const auto n = static_cast<std::int64_t>(std::floor(std::exp(log_n(rng))));
    const double lam = side(rng) < 0.5 ? up(rng) : down(rng);
    if (n < 2 || DiscreteWindow::of(n, lam).empty()) continue;
    triples.push_back({seed, n, lam});
  }

  const auto start = Clock::now();
  MaxTracker worst;
  std::atomic<int> failures{0};
  parallel_for(triples.size(), [&](std::size_t i) {
    const Triple& t = triples[i];
    const IdentityResidual r = lemma2_residual(random_sequence(t.seed), t.n, t.lambda);
    const double ratio = r.residual / (1.0 + std::abs(r.lhs));
    worst.offer(ratio);
    if (!(r.residual <= 1e-12 * (1.0 + std::abs(r.lhs)))) failures++;
  });
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = failures == 0 && secs < 5.0;
  o.detail = fmt("200 triples, %d over budget, max residual/(1+|lhs|) = %.3g, %.2f s", failures.load(),
                 worst.value, secs);
  return o;
}

Outcome lemma1_catalog_sweep() {
  const std::vector<std::string> names = {"const(5)", "log_u", "sin_loglog", "c1_conv(1)", "thm3"};
  const std::vector<double> ts = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  const std::vector<double> lams = {1.1, 1.5, 2.0, 0.5, 0.9};
  std::vector<FuncSpec> fns;
  for (const auto& n : names) fns.push_back(*catalog_get(n).function);

  const auto start = Clock::now();
  const std::size_t cells = fns.size() * ts.size() * lams.size();
  std::atomic<int> bad{0};
  MaxTracker worst_residual;
  std::mutex first_m;
  std::string first_bad;
  parallel_for(cells, [&](std::size_t i) {
    const std::size_t fi = i / (ts.size() * lams.size());
    const std::size_t ti = (i / lams.size()) % ts.size();
    const double lam = lams[i % lams.size()];
    const IdentityResidual r = lam > 1.0 ? lemma1_upper_residual(fns[fi], ts[ti], lam)
                                         : lemma1_lower_residual(fns[fi], ts[ti], lam);
    worst_residual.offer(r.residual);
    const bool ok = r.converged && r.residual <= kContinuousBudgetFactor * (r.combined_error + r.rounding_floor) &&
                    r.residual <= 1e-6;
    if (!ok) {
      bad++;
      std::lock_guard lock(first_m);
      if (first_bad.empty()) {
        first_bad = fmt(" first: %s t=%g lambda=%g residual=%.3g err=%.3g", names[fi].c_str(), ts[ti], lam,
                        r.residual, r.combined_error);
      }
    }
  });
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = bad == 0 && secs < 30.0;
  o.detail = fmt("%zu cells, %d outside budget, max residual %.3g, %.2f s", cells, bad.load(),
                 worst_residual.value, secs) +
             first_bad;
  return o;
}

Outcome thm3_counterexample() {
  int bound_fail = 0;
  for (int m = 2; m <= 40; ++m) {
    const double lo = std::ldexp(1.0, m - 1);
    const double hi = std::ldexp(1.0, m);
    const double bound = double(m) * (m - 1) / hi;
    std::vector<LogPoint> probes = {
        {lo, 0.0}, {lo, 0.5 * thm3_plateau_width(m - 1)}, {lo, thm3_plateau_width(m - 1)},
        {lo * 1.25, 0.0}, {lo * 1.5, 0.0}, {std::nextafter(hi, 0.0), 0.0}};
    for (const LogPoint& p : probes) {
      const double tau = thm3_tau_closed_form(p);
      if (!(tau >= 0.0 && tau <= bound)) bound_fail++;
    }
  }

  const FuncSpec f = thm3_function();
  std::vector<LogPoint> pts;
  for (int i = 0; i <= 40; ++i) pts.push_back({std::exp(std::log(1.5) + i * (std::log(512.0) - std::log(1.5)) / 40), 0.0});
  for (int m = 1; m <= 8; ++m) {
    const double a = std::ldexp(1.0, m);
    pts.push_back({a, 0.5 * thm3_plateau_width(m)});
    pts.push_back({a, thm3_plateau_width(m)});
  }
  MaxTracker worst;
  std::atomic<int> quad_fail{0};
  parallel_for(pts.size(), [&](std::size_t i) {
    const double want = thm3_tau_closed_form(pts[i]);
    const MeanPoint got = cont_l1(f, pts[i]);
    const double rel = want == 0.0 ? std::fabs(got.value.real()) : std::fabs(got.value.real() - want) / want;
    worst.offer(rel);
    if (!(rel <= 1e-8) || !got.converged) quad_fail++;
  });

  int spike_fail = 0;
  for (int m = 1; m <= 40; ++m) {
    if (thm3_sigma_spike(m) != static_cast<double>(m)) spike_fail++;
  }
  Outcome o;
  o.pass = bound_fail == 0 && quad_fail == 0 && spike_fail == 0;
  o.detail = fmt("bound violations %d (m=2..40), quadrature mismatches %d of %zu (max rel %.3g), spike mismatches %d",
                 bound_fail, quad_fail.load(), pts.size(), worst.value, spike_fail);
  return o;
}

Outcome c1_conv_inclusion() {
  const FuncSpec f = *catalog_get("c1_conv(1)").function;
  std::vector<double> gaps;
  for (int d = 2; d <= 8; ++d) gaps.push_back(std::fabs(std::fabs(cont_l1(f, std::pow(10.0, d)).value.real()) - 1.0));
  int slack_fail = 0;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i] > 1.1 * gaps[i - 1]) slack_fail++;
  }
  const double tau8 = cont_l1(f, 1e8).value.real();
  Outcome o;
  o.pass = std::fabs(tau8 - 1.0) <= 0.1 && slack_fail == 0;
  o.detail = fmt("|tau(1e8)-1| = %.3g, gap 1e2 -> 1e8: %.3g -> %.3g, steps over 10%% slack: %d",
                 std::fabs(tau8 - 1.0), gaps.front(), gaps.back(), slack_fail);
  return o;
}

Outcome discrete_separation() {
  const auto start = Clock::now();
  const SeqSpec s = *catalog_get("alt_k").sequence;
  const Grid g = Grid::decades(10, 1e6);
  const MeanSeries tau = mean_series(Spec{s}, g, MeanKind::L1);
  double worst = 0.0;
  for (const MeanPoint& p : tau.points) {
    worst = std::max(worst, std::fabs(p.value.real()) * harmonic(static_cast<std::int64_t>(p.abscissa)));
  }
  std::vector<std::int64_t> ns;
  for (std::int64_t n = 10; n <= 1000000; n *= 10) {
    ns.push_back(n);
    ns.push_back(n + 1);
  }
  ns.push_back(999999);
  std::vector<double> pts(ns.begin(), ns.end());
  std::sort(pts.begin(), pts.end());
  const Grid ng = Grid::explicit_points(pts, Grid::Axis::integer);
  const MeanSeries sigma = mean_series(Spec{s}, ng, MeanKind::C1);
  int even_fail = 0, odd_fail = 0;
  double odd_worst = 0.0;
  for (const MeanPoint& p : sigma.points) {
    const auto n = static_cast<std::int64_t>(p.abscissa);
    if (n % 2 == 0) {
      if (p.value.real() != 0.5) even_fail++;
    } else {
      const std::int64_t m = (n - 1) / 2;
      const double want = -static_cast<double>(m + 1) / static_cast<double>(2 * m + 1);
      const double err = std::fabs(p.value.real() - want);
      odd_worst = std::max(odd_worst, err);
      if (err > 1e-15) odd_fail++;
    }
  }
  const double secs = seconds_since(start);
  Outcome o;
  o.pass = worst <= 1.0 + 1e-9 && even_fail == 0 && odd_fail == 0 && secs < 10.0;
  o.detail = fmt("max |tau_n| l_n = %.12g, sigma even mismatches %d, odd mismatches %d (max err %.2g), %.2f s",
                 worst, even_fail, odd_fail, odd_worst, secs);
  return o;
}

Outcome window_closed_form() {
  const FuncSpec f = *catalog_get("log_u").function;
  double worst = 0.0;
  for (double v : {2.0, 10.0, 50.0}) {
    for (double lam : {1.1, 1.5, 2.0}) {
      const WindowAvg w = window_avg_upper(f, LogPoint{v, 0.0}, lam);
      worst = std::max(worst, std::fabs(w.value.real() - (lam - 1.0) * v / 2.0));
    }
  }
  Outcome o;
  o.pass = worst <= 1e-8;
  o.detail = fmt("9 cells, max |value - (lambda-1)v/2| = %.3g", worst);
  return o;
}

Outcome slow_oscillation_bounds() {
  const ProfileOptions opt;
  const TauberianReport sll = condition_profile(catalog_get("sin_loglog").spec(), Grid::decades(10, 1e6, Grid::Axis::real), opt);
  int sll_fail = 0, sll_cells = 0;
  double sll_worst = -1e300;
  for (const ModulusRow& row : sll.so_modulus) {
    for (const auto& cell : row.cells) {
      if (!cell) continue;
      ++sll_cells;
      sll_worst = std::max(sll_worst, *cell - std::log(row.lambda));
      if (*cell > std::log(row.lambda) + 1e-9) sll_fail++;
    }
  }
  const TauberianReport alt = condition_profile(catalog_get("alt").spec(), Grid::decades(10, 1e4), opt);
  int alt_fail = 0, alt_cells = 0;
  for (const ModulusRow& row : alt.so_modulus) {
    for (const auto& cell : row.cells) {
      if (!cell) continue;
      ++alt_cells;
      if (*cell != 2.0) alt_fail++;
    }
  }
  Outcome o;
  o.pass = sll_fail == 0 && alt_fail == 0 && sll_cells > 0 && alt_cells > 0;
  o.detail = fmt("sin_loglog %d cells, max(modulus - log lambda) = %.3g; alt %d non-empty windows, %d not equal to 2",
                 sll_cells, sll_worst, alt_cells, alt_fail);
  return o;
}

Outcome toeplitz() {
  int order_fail = 0;
  for (std::int64_t m : {2LL, 10LL, 1000LL, 1000000LL}) {
    const ToeplitzBounds b = toeplitz_bounds(m);
    if (!(b.lower < b.upper)) order_fail++;
  }
  const ToeplitzBounds big = toeplitz_bounds(1000000);
  Outcome o;
  o.pass = order_fail == 0 && std::fabs(big.upper - 1.0) <= 0.05 && std::fabs(big.lower - 1.0) <= 0.05;
  o.detail = fmt("ordering failures %d; m=1e6: lower %.6f upper %.6f", order_fail, big.lower, big.upper);
  return o;
}

Outcome necessity_trend() {
  const FuncSpec f = *catalog_get("c1_conv(1)").function;
  const auto tail_sup = [&](double decade) {
    double sup = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double t = std::pow(10.0, decade - 0.25 + 0.125 * i);
      sup = std::max(sup, std::abs(window_avg_upper(f, t, 1.1).value));
    }
    return sup;
  };
  const double near = tail_sup(3.0);
  const double far = tail_sup(7.0);
  Outcome o;
  o.pass = far * 2.0 <= near;
  o.detail = fmt("sup |upper window| at lambda=1.1: t~1e3 %.3g, t~1e7 %.3g, ratio %.3g", near, far, near / far);
  return o;
}

Outcome parser_corpus() {
  int round_trip_fail = 0, value_fail = 0;
  const auto fixtures = corpus::grammar_fixtures();
  for (const auto& f : fixtures) {
    const Expr a = Expr::parse(f.text, f.var);
    const Expr b = Expr::parse(a.to_string(), f.var);
    if (!a.same_tree(b) || b.to_string() != a.to_string()) round_trip_fail++;
    const double want = f.oracle(f.at);
    if (std::fabs(a.eval(f.at) - want) > 1e-14 * std::max(1.0, std::fabs(want))) value_fail++;
  }
  struct DomainCase {
    const char* text;
    Var var;
    double at;
    DomainErrorKind kind;
    std::size_t offset;
  };
  const DomainCase cases[] = {
      {"1 + log(u - 3)", Var::u, 2.0, DomainErrorKind::log_of_non_positive, 4},
      {"(-1)^k * k", Var::k, 2.5, DomainErrorKind::negative_base_fractional_exponent, 4},
      {"2 + 1/(u - 1)", Var::u, 1.0, DomainErrorKind::non_finite, 5},
  };
  int domain_fail = 0;
  for (const auto& c : cases) {
    bool ok = false;
    try {
      (void)Expr::parse(c.text, c.var).eval(c.at);
    } catch (const DomainError& e) {
      ok = e.kind() == c.kind && e.offset() == c.offset;
    }
    if (!ok) domain_fail++;
  }
  Outcome o;
  o.pass = fixtures.size() == 30 && round_trip_fail == 0 && value_fail == 0 && domain_fail == 0;
  o.detail = fmt("%zu fixtures, round-trip failures %d, value mismatches %d, domain-error mismatches %d of 3",
                 fixtures.size(), round_trip_fail, value_fail, domain_fail);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {"discrete representation identity on random triples", lemma2_random_triples},
      {"continuous representation identity over the catalog", lemma1_catalog_sweep},
      {"plateau counterexample bounds, quadrature and spikes", thm3_counterexample},
      {"A + sin(u)/u logarithmic mean approaches A", c1_conv_inclusion},
      {"(-1)^k k: logarithmic to 0, Cesaro oscillating", discrete_separation},
      {"log u window average closed form", window_closed_form},
      {"slow-oscillation modulus bounds", slow_oscillation_bounds},
      {"harmonic Toeplitz row-sum bounds", toeplitz},
      {"window proxy decay for A + sin(u)/u", necessity_trend},
      {"expression corpus and domain errors", parser_corpus},
  };
  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) failed++;
    std::printf("%s [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d acceptance criteria passed\n", 10 - failed, 10);
  return failed == 0 ? 0 : 1;
}
