#include "logtauber/tauberian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "logtauber/means.hpp"
#include "logtauber/parallel.hpp"
#include "logtauber/summation.hpp"

namespace logtauber {

namespace {

constexpr int kWindowProbes = 256;
constexpr double kTieAllowance = 1e-12;

void require_upper(double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("upper window needs lambda > 1");
  }
}

void require_lower(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw InvalidArgument("lower window needs 0 < lambda < 1");
  }
}

void require_log_t(const LogPoint& log_t) {
  if (!(log_t.value() > 0.0)) throw InvalidArgument("window needs t > 1");
}

LogPoint scaled(const LogPoint& p, double lambda) {
  return {p.base * lambda, p.offset * lambda};
}

std::complex<double> value_at(const FuncSpec& f, const LogPoint& p) {
  return {f.eval_log(p), f.is_complex() ? f.imag().eval_log(p) : 0.0};
}

std::complex<double> term(const SeqSpec& s, std::int64_t k) {
  return s.is_complex() ? s.term_complex(k) : std::complex<double>(s.term(k));
}

// ∫_{lo}^{hi} (s(u) - s(t))/u du per channel.
struct ChannelIntegral {
  std::complex<double> value;
  double error = 0.0;
  bool converged = true;
};

ChannelIntegral difference_integral(const FuncSpec& f, const LogPoint& log_t,
                                    const LogPoint& lo, const LogPoint& hi,
                                    const QuadConfig& cfg) {
  ChannelIntegral out;
  const QuadResult re =
      integrate_log_weighted(f, lo, hi, cfg, f.eval_log(log_t));
  out.value = re.value;
  out.error = re.error_estimate;
  out.converged = re.converged;
  if (f.is_complex()) {
    const FuncSpec& im = f.imag();
    const QuadResult qi = integrate_log_weighted(im, lo, hi, cfg, im.eval_log(log_t));
    out.value.imag(qi.value);
    out.error += qi.error_estimate;
    out.converged = out.converged && qi.converged;
  }
  return out;
}

}  // namespace

bool DiscreteWindow::admits(std::int64_t k, std::int64_t n, double lambda) {
  const double bound = lambda * std::log(static_cast<double>(n));
  return std::log(static_cast<double>(k)) <= bound + kTieAllowance * bound;
}

std::int64_t DiscreteWindow::floor_power(std::int64_t n, double lambda) {
  if (n < 2) throw InvalidArgument("discrete windows need n >= 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("discrete windows need lambda > 0");
  }
  const double p = std::exp(lambda * std::log(static_cast<double>(n)));
  if (p > 9.0e15) throw InvalidArgument("n^lambda exceeds the exact integer range");
  auto k = static_cast<std::int64_t>(std::floor(p));
  while (admits(k + 1, n, lambda)) ++k;
  while (k > 1 && !admits(k, n, lambda)) --k;
  return k;
}

DiscreteWindow DiscreteWindow::of(std::int64_t n, double lambda) {
  DiscreteWindow w;
  w.n_ = n;
  w.lambda_ = lambda;
  const std::int64_t edge = floor_power(n, lambda);
  if (lambda > 1.0) {
    w.side_ = WindowSide::upper;
    w.first_ = n + 1;
    w.last_ = edge;
  } else if (lambda < 1.0) {
    w.side_ = WindowSide::lower;
    w.first_ = edge + 1;
    w.last_ = n;
  } else {
    throw InvalidArgument("lambda = 1 has no window");
  }
  return w;
}

DiscreteWindow DiscreteWindow::by_log_ratio(std::int64_t n, double lambda) {
  if (n < 2) throw InvalidArgument("discrete windows need n >= 2");
  DiscreteWindow w;
  w.n_ = n;
  w.lambda_ = lambda;
  if (lambda > 1.0) {
    // {k > n : log k / log n <= λ}
    w.side_ = WindowSide::upper;
    w.first_ = n + 1;
    std::int64_t k = n;
    while (admits(k + 1, n, lambda)) ++k;
    w.last_ = k;
  } else if (lambda > 0.0 && lambda < 1.0) {
    // {k <= n : log k / log n > λ}
    w.side_ = WindowSide::lower;
    std::int64_t k = n;
    while (k >= 1 && !admits(k, n, lambda)) --k;
    w.first_ = k + 1;
    w.last_ = n;
  } else {
    throw InvalidArgument("lambda must be positive and != 1");
  }
  return w;
}

WindowAvg window_avg_upper(const FuncSpec& f, double t, double lambda,
                           const QuadConfig& cfg) {
  WindowAvg w = window_avg_upper(f, LogPoint::of_u(t), lambda, cfg);
  w.abscissa = t;
  return w;
}

WindowAvg window_avg_upper(const FuncSpec& f, const LogPoint& log_t,
                           double lambda, const QuadConfig& cfg) {
  require_upper(lambda);
  require_log_t(log_t);
  const double norm = (lambda - 1.0) * log_t.value();
  const ChannelIntegral I =
      difference_integral(f, log_t, log_t, scaled(log_t, lambda), cfg);
  WindowAvg w;
  w.abscissa = log_t.value();
  w.lambda = lambda;
  w.side = WindowSide::upper;
  w.sum = I.value;
  w.value = I.value / norm;
  w.measure_normalized = w.value;
  w.quad_error = I.error / norm;
  w.converged = I.converged;
  return w;
}

WindowAvg window_avg_lower(const FuncSpec& f, double t, double lambda,
                           const QuadConfig& cfg) {
  WindowAvg w = window_avg_lower(f, LogPoint::of_u(t), lambda, cfg);
  w.abscissa = t;
  return w;
}

WindowAvg window_avg_lower(const FuncSpec& f, const LogPoint& log_t,
                           double lambda, const QuadConfig& cfg) {
  require_lower(lambda);
  require_log_t(log_t);
  const double norm = (1.0 - lambda) * log_t.value();
  const ChannelIntegral I =
      difference_integral(f, log_t, scaled(log_t, lambda), log_t, cfg);
  WindowAvg w;
  w.abscissa = log_t.value();
  w.lambda = lambda;
  w.side = WindowSide::lower;
  // The integrand is s(t) - s(u): the negated difference integral.
  w.sum = -I.value;
  w.value = w.sum / norm;
  w.measure_normalized = w.value;
  w.quad_error = I.error / norm;
  w.converged = I.converged;
  return w;
}

namespace {

WindowAvg discrete_window(const SeqSpec& s, const DiscreteWindow& win) {
  WindowAvg w;
  w.abscissa = static_cast<double>(win.n());
  w.lambda = win.lambda();
  w.side = win.side();
  if (win.empty()) {
    w.empty = true;
    return w;
  }
  const std::complex<double> sn = term(s, win.n());
  CompensatedComplexSum sum;
  CompensatedSum mass;
  TermStream terms(s, win.first(), win.last());
  for (std::int64_t k = win.first(); k <= win.last(); ++k) {
    const double kd = static_cast<double>(k);
    const std::complex<double> sk = terms.next();
    const std::complex<double> diff =
        win.side() == WindowSide::upper ? sk - sn : sn - sk;
    sum.add(diff / kd);
    mass.add(1.0 / kd);
  }
  w.sum = sum.value();
  const double count = static_cast<double>(win.size());
  w.value = w.sum / (count * harmonic(win.n()));
  w.measure_normalized = w.sum / mass.value();
  return w;
}

}  // namespace

WindowAvg disc_window_upper(const SeqSpec& s, std::int64_t n, double lambda) {
  require_upper(lambda);
  return discrete_window(s, DiscreteWindow::of(n, lambda));
}

WindowAvg disc_window_lower(const SeqSpec& s, std::int64_t n, double lambda) {
  require_lower(lambda);
  return discrete_window(s, DiscreteWindow::of(n, lambda));
}

std::optional<double> slow_decrease_margin(const SeqSpec& s,
                                           const DiscreteWindow& window) {
  if (window.empty()) return std::nullopt;
  const double sn = s.term(window.n());
  double margin = std::numeric_limits<double>::infinity();
  TermStream terms(s, window.first(), window.last());
  for (std::int64_t k = window.first(); k <= window.last(); ++k) {
    margin = std::min(margin, terms.next().real() - sn);
  }
  return margin;
}

std::optional<double> slow_decrease_margin(const SeqSpec& s, std::int64_t n,
                                           double lambda) {
  require_upper(lambda);
  return slow_decrease_margin(s, DiscreteWindow::of(n, lambda));
}

std::optional<double> slow_osc_modulus(const SeqSpec& s, std::int64_t n,
                                       double lambda) {
  require_upper(lambda);
  const DiscreteWindow window = DiscreteWindow::of(n, lambda);
  if (window.empty()) return std::nullopt;
  const std::complex<double> sn = term(s, n);
  double modulus = 0.0;
  TermStream terms(s, window.first(), window.last());
  for (std::int64_t k = window.first(); k <= window.last(); ++k) {
    modulus = std::max(modulus, std::abs(terms.next() - sn));
  }
  return modulus;
}

std::vector<LogPoint> window_probes(const FuncSpec& f, const LogPoint& log_t,
                                    double lambda) {
  require_upper(lambda);
  require_log_t(log_t);
  const LogPoint end = scaled(log_t, lambda);
  const double width = log_distance(log_t, end);
  std::vector<LogPoint> probes;
  probes.reserve(kWindowProbes + 8);
  for (int j = 1; j <= kWindowProbes; ++j) {
    probes.push_back({log_t.base, log_t.offset + width * j / kWindowProbes});
  }
  for (const Segment& seg : f.segments()) {
    if (log_t < seg.start && seg.start <= end) probes.push_back(seg.start);
  }
  return probes;
}

std::optional<double> slow_decrease_margin(const FuncSpec& f, double t,
                                           double lambda) {
  const LogPoint log_t = LogPoint::of_u(t);
  const double st = f.eval_log(log_t);
  double margin = std::numeric_limits<double>::infinity();
  for (const LogPoint& p : window_probes(f, log_t, lambda)) {
    margin = std::min(margin, f.eval_log(p) - st);
  }
  return margin;
}

std::optional<double> slow_osc_modulus(const FuncSpec& f, double t,
                                       double lambda) {
  const LogPoint log_t = LogPoint::of_u(t);
  const std::complex<double> st = value_at(f, log_t);
  double modulus = 0.0;
  for (const LogPoint& p : window_probes(f, log_t, lambda)) {
    modulus = std::max(modulus, std::abs(value_at(f, p) - st));
  }
  return modulus;
}

IntegrandCheck integrand_conditions(const FuncSpec& f, double x0,
                                    const std::vector<double>& x_grid,
                                    double C) {
  if (x_grid.empty()) throw InvalidArgument("integrand check needs a grid");
  if (!(C > 0.0)) throw InvalidArgument("integrand check needs C > 0");
  const double lower = std::max(x0, 1.0);
  IntegrandCheck out;
  out.x_grid = x_grid;
  out.x0 = x0;
  out.bound = C;
  out.min_weighted = std::numeric_limits<double>::infinity();
  out.max_abs_weighted = 0.0;
  for (double x : x_grid) {
    if (!(x > lower)) {
      throw InvalidArgument("integrand grid must lie in (max(x0, 1), inf)");
    }
    const double w = x * std::log(x);
    const std::complex<double> fx = f.eval_complex(x);
    out.min_weighted = std::min(out.min_weighted, w * fx.real());
    out.max_abs_weighted = std::max(out.max_abs_weighted, w * std::abs(fx));
  }
  out.one_sided_holds = out.min_weighted >= -C;
  out.two_sided_holds = out.max_abs_weighted <= C;
  return out;
}

namespace {

std::size_t resolve_tail(std::size_t requested, std::size_t size) {
  if (requested == 0) {
    return std::max<std::size_t>(1, (size + 3) / 4);
  }
  if (requested > size) throw InvalidArgument("tail exceeds the grid size");
  return requested;
}

void aggregate(ProfileRow& row, std::size_t tail) {
  const std::size_t from = row.cells.size() - tail;
  for (std::size_t i = from; i < row.cells.size(); ++i) {
    const ProfileCell& c = row.cells[i];
    if (c.empty) continue;
    const double re = c.value.real();
    const double mag = std::abs(c.value);
    row.tail_inf = row.tail_inf ? std::min(*row.tail_inf, re) : re;
    row.tail_sup_abs = row.tail_sup_abs ? std::max(*row.tail_sup_abs, mag) : mag;
  }
}

void aggregate(ModulusRow& row, std::size_t tail) {
  const std::size_t from = row.cells.size() - tail;
  for (std::size_t i = from; i < row.cells.size(); ++i) {
    if (!row.cells[i]) continue;
    const double v = *row.cells[i];
    row.tail_inf = row.tail_inf ? std::min(*row.tail_inf, v) : v;
    row.tail_sup = row.tail_sup ? std::max(*row.tail_sup, v) : v;
  }
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ConditionTrend make_trend(const std::string& name, bool want_increase,
                          std::vector<VerdictEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const VerdictEntry& a, const VerdictEntry& b) {
                     return std::fabs(std::log(a.lambda)) >
                            std::fabs(std::log(b.lambda));
                   });
  ConditionTrend trend;
  trend.condition = name;
  trend.entries = std::move(entries);
  bool monotone = true;
  std::optional<double> prev;
  for (const VerdictEntry& e : trend.entries) {
    if (!e.aggregate) continue;
    if (prev) {
      const double slack = 1e-12 * (1.0 + std::fabs(*prev));
      if (want_increase ? *e.aggregate < *prev - slack
                        : *e.aggregate > *prev + slack) {
        monotone = false;
      }
    }
    prev = e.aggregate;
  }
  trend.improves_toward_one = monotone && prev.has_value();

  const VerdictEntry* closest = nullptr;
  for (const VerdictEntry& e : trend.entries) {
    if (e.aggregate) closest = &e;
  }
  if (closest == nullptr) {
    trend.summary = name + ": no non-empty tail cells";
  } else {
    trend.summary = name + ": tail " + (want_increase ? "infimum " : "supremum ") +
                    format_number(*closest->aggregate) + " at lambda=" +
                    format_number(closest->lambda) +
                    " (closest to 1); moves monotonically toward the target as "
                    "lambda -> 1: " +
                    (trend.improves_toward_one ? "yes" : "no");
  }
  return trend;
}

}  // namespace

std::vector<ConditionTrend> derive_verdict(const TauberianReport& r) {
  std::vector<ConditionTrend> out;
  auto rows_entries = [](const std::vector<ProfileRow>& rows, bool inf,
                         const std::string& name) {
    std::vector<VerdictEntry> e;
    for (const ProfileRow& row : rows) {
      e.push_back({name, row.lambda, inf ? row.tail_inf : row.tail_sup_abs});
    }
    return e;
  };
  auto modulus_entries = [](const std::vector<ModulusRow>& rows, bool inf,
                            const std::string& name) {
    std::vector<VerdictEntry> e;
    for (const ModulusRow& row : rows) {
      e.push_back({name, row.lambda, inf ? row.tail_inf : row.tail_sup});
    }
    return e;
  };
  out.push_back(make_trend("upper_window_inf", true,
                           rows_entries(r.upper, true, "upper_window_inf")));
  out.push_back(make_trend("lower_window_inf", true,
                           rows_entries(r.lower, true, "lower_window_inf")));
  out.push_back(make_trend("upper_window_sup_abs", false,
                           rows_entries(r.upper, false, "upper_window_sup_abs")));
  out.push_back(make_trend("slow_decrease_margin_inf", true,
                           modulus_entries(r.sd_margin, true,
                                           "slow_decrease_margin_inf")));
  out.push_back(make_trend("slow_oscillation_sup", false,
                           modulus_entries(r.so_modulus, false,
                                           "slow_oscillation_sup")));
  return out;
}

TauberianReport condition_profile(const Spec& spec, const Grid& grid,
                                  const ProfileOptions& options) {
  for (double l : options.lambdas_upper) require_upper(l);
  for (double l : options.lambdas_lower) require_lower(l);
  options.quad.validate();

  TauberianReport report;
  report.discrete = std::holds_alternative<SeqSpec>(spec);
  report.abscissae = grid.points();
  report.tail = resolve_tail(options.tail, grid.size());
  report.is_complex = std::visit([](const auto& s) { return s.is_complex(); }, spec);

  const std::size_t nx = grid.size();
  const std::size_t nu = options.lambdas_upper.size();
  const std::size_t nl = options.lambdas_lower.size();

  if (report.discrete) {
    if (!grid.is_integer()) throw InvalidArgument("discrete profile needs an integer grid");
    grid.require_above(1.0, "a discrete window");
  } else if (grid.is_log()) {
    grid.require_above(0.0, "a continuous window");
  } else {
    grid.require_above(1.0, "a continuous window");
  }

  auto init_rows = [&](std::vector<ProfileRow>& rows,
                       const std::vector<double>& lambdas) {
    rows.resize(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      rows[i].lambda = lambdas[i];
      rows[i].cells.resize(nx);
    }
  };
  auto init_mod = [&](std::vector<ModulusRow>& rows) {
    rows.resize(nu);
    for (std::size_t i = 0; i < nu; ++i) {
      rows[i].lambda = options.lambdas_upper[i];
      rows[i].cells.resize(nx);
    }
  };
  init_rows(report.upper, options.lambdas_upper);
  init_rows(report.lower, options.lambdas_lower);
  if (report.discrete) {
    init_rows(report.upper_literal, options.lambdas_upper);
    init_rows(report.lower_literal, options.lambdas_lower);
  }
  init_mod(report.sd_margin);
  init_mod(report.so_modulus);

  const auto cell_of = [](const WindowAvg& w, bool literal) {
    ProfileCell c;
    c.abscissa = w.abscissa;
    c.value = literal ? w.value : w.measure_normalized;
    c.quad_error = w.quad_error;
    c.converged = w.converged;
    c.empty = w.empty;
    return c;
  };

  // Work items: (row kind, λ index, abscissa index), computed independently.
  const std::size_t per_x = nu + nl;
  parallel_for(per_x * nx, [&](std::size_t item) {
    const std::size_t xi = item / per_x;
    const std::size_t li = item % per_x;
    const bool upper = li < nu;
    const double lambda =
        upper ? options.lambdas_upper[li] : options.lambdas_lower[li - nu];
    const double x = grid[xi];

    if (const auto* seq = std::get_if<SeqSpec>(&spec)) {
      const auto n = static_cast<std::int64_t>(x);
      const WindowAvg w = upper ? disc_window_upper(*seq, n, lambda)
                                : disc_window_lower(*seq, n, lambda);
      if (upper) {
        report.upper[li].cells[xi] = cell_of(w, false);
        report.upper_literal[li].cells[xi] = cell_of(w, true);
        const DiscreteWindow win = DiscreteWindow::of(n, lambda);
        report.sd_margin[li].cells[xi] = slow_decrease_margin(*seq, win);
        report.so_modulus[li].cells[xi] = slow_osc_modulus(*seq, n, lambda);
      } else {
        report.lower[li - nu].cells[xi] = cell_of(w, false);
        report.lower_literal[li - nu].cells[xi] = cell_of(w, true);
      }
      return;
    }

    const auto& f = std::get<FuncSpec>(spec);
    const LogPoint log_t = grid.is_log() ? LogPoint{x, 0.0} : LogPoint::of_u(x);
    if (upper) {
      WindowAvg w = window_avg_upper(f, log_t, lambda, options.quad);
      w.abscissa = x;
      report.upper[li].cells[xi] = cell_of(w, false);
      // Margins need s at every probe; the log-domain probe list handles both
      // grid kinds.
      const double st = f.eval_log(log_t);
      const std::complex<double> stc = value_at(f, log_t);
      double margin = std::numeric_limits<double>::infinity();
      double modulus = 0.0;
      for (const LogPoint& p : window_probes(f, log_t, lambda)) {
        margin = std::min(margin, f.eval_log(p) - st);
        modulus = std::max(modulus, std::abs(value_at(f, p) - stc));
      }
      report.sd_margin[li].cells[xi] = margin;
      report.so_modulus[li].cells[xi] = modulus;
    } else {
      WindowAvg w = window_avg_lower(f, log_t, lambda, options.quad);
      w.abscissa = x;
      report.lower[li - nu].cells[xi] = cell_of(w, false);
    }
  });

  for (auto* rows : {&report.upper, &report.lower, &report.upper_literal,
                     &report.lower_literal}) {
    for (ProfileRow& row : *rows) aggregate(row, report.tail);
  }
  for (auto* rows : {&report.sd_margin, &report.so_modulus}) {
    for (ModulusRow& row : *rows) aggregate(row, report.tail);
  }
  report.verdict = derive_verdict(report);
  return report;
}

}  // namespace logtauber
