#include "logtauber/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "logtauber/summation.hpp"

namespace logtauber {

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw InvalidArgument("quadrature tolerances must be positive");
  }
  if (max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
  if (max_panels < 16) throw InvalidArgument("max_panels must be >= 16");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kInitialPanels = 4;

enum class Weight { plain, log, loglog };

// One segment restricted to the integration range, in the local coordinate
// y in [0, width] of the weight's substitution.
struct Task {
  const Piece* body = nullptr;
  double origin = 0.0;  // ua (plain) or v0 (log, loglog)
  double width = 0.0;   // du, dv or dw
  double shift = 0.0;
  Weight weight = Weight::log;

  double operator()(double y) const {
    double s = 0.0;
    switch (weight) {
      case Weight::plain:
        s = body->value(origin + y);
        break;
      case Weight::log:
        s = body->value(std::exp(origin + y));
        break;
      case Weight::loglog:
        s = body->value(std::exp(origin * std::exp(y)));
        break;
    }
    if (!std::isfinite(s)) {
      throw DomainError(DomainErrorKind::non_finite,
                        "integrand is not finite inside the range");
    }
    return s - shift;
  }
};

// Three nested Simpson levels on 9 equispaced points: S1 (3 points), S2 (5)
// and S3 (9). The Richardson estimate |S3 - S2|/15 is floored by the error
// predicted from the coarser pair, |S2 - S1|/(16*15), and by the gap to a
// Simpson 3/8 sum on the off-grid points h/3, 2h/3. Samples spaced at a
// multiple of an oscillation's period make all dyadic levels agree; the
// off-grid pair sees a different phase.
struct Panel {
  std::size_t task = 0;
  double y0 = 0.0;
  double h = 0.0;
  double f[9] = {};
  double g[2] = {};  // at y0 + h/3, y0 + 2h/3
  double s2 = 0.0;
  double s3 = 0.0;
  double err = 0.0;
  double mass = 0.0;  // Σ|weights·f|, for the rounding floor
  int depth = 0;

  double value() const { return s3 + (s3 - s2) / 15.0; }
};

void finish_panel(Panel& p) {
  const double* f = p.f;
  const double s1 = p.h / 6.0 * (f[0] + 4.0 * f[4] + f[8]);
  p.s2 = p.h / 12.0 * (f[0] + 4.0 * f[2] + 2.0 * f[4] + 4.0 * f[6] + f[8]);
  p.s3 = p.h / 24.0 *
         (f[0] + 4.0 * f[1] + 2.0 * f[2] + 4.0 * f[3] + 2.0 * f[4] + 4.0 * f[5] +
          2.0 * f[6] + 4.0 * f[7] + f[8]);
  const double s38 = p.h / 8.0 * (f[0] + 3.0 * p.g[0] + 3.0 * p.g[1] + f[8]);
  // For smooth f, |S3 - S3/8| / 576 tracks the S3 error.
  p.err = std::max({std::fabs(p.s3 - p.s2) / 15.0, std::fabs(p.s2 - s1) / 240.0,
                    std::fabs(p.s3 - s38) / 576.0});
  double m = std::fabs(f[0]) + std::fabs(f[8]);
  for (int i = 1; i < 8; ++i) m += (i % 2 ? 4.0 : 2.0) * std::fabs(f[i]);
  p.mass = std::fabs(p.h) / 24.0 * m;
}

Panel make_panel(const std::vector<Task>& tasks, std::size_t t, double y0,
                 double h, int depth) {
  Panel p;
  p.task = t;
  p.y0 = y0;
  p.h = h;
  p.depth = depth;
  for (int i = 0; i < 9; ++i) p.f[i] = tasks[t](y0 + 0.125 * i * h);
  p.g[0] = tasks[t](y0 + h / 3.0);
  p.g[1] = tasks[t](y0 + 2.0 * h / 3.0);
  finish_panel(p);
  return p;
}

std::pair<Panel, Panel> split(const std::vector<Task>& tasks, const Panel& p) {
  const Task& g = tasks[p.task];
  const double half = 0.5 * p.h;
  Panel l, r;
  l.task = r.task = p.task;
  l.depth = r.depth = p.depth + 1;
  l.y0 = p.y0;
  l.h = half;
  r.y0 = p.y0 + half;
  r.h = half;
  for (int i = 0; i <= 4; ++i) {
    l.f[2 * i] = p.f[i];
    r.f[2 * i] = p.f[4 + i];
  }
  for (int i = 0; i < 4; ++i) {
    l.f[2 * i + 1] = g(l.y0 + (2 * i + 1) * 0.0625 * p.h);
    r.f[2 * i + 1] = g(r.y0 + (2 * i + 1) * 0.0625 * p.h);
  }
  for (Panel* c : {&l, &r}) {
    c->g[0] = g(c->y0 + c->h / 3.0);
    c->g[1] = g(c->y0 + 2.0 * c->h / 3.0);
  }
  finish_panel(l);
  finish_panel(r);
  return {l, r};
}

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const { return a.err < b.err; }
};

QuadResult integrate(const FuncSpec& f, const LogPoint& a, const LogPoint& b,
                     const QuadConfig& cfg, double shift, Weight weight) {
  cfg.validate();
  const double span = log_distance(a, b);
  if (span < 0.0) throw InvalidArgument("integration range must have a <= b");
  if (!std::isfinite(shift)) throw InvalidArgument("shift must be finite");
  QuadResult out;
  if (span == 0.0) return out;
  if (weight == Weight::loglog && !(a.value() > 0.0)) {
    throw InvalidArgument("log log weight needs a lower limit above u = 1");
  }

  const auto& segs = f.segments();
  const std::size_t first = f.segment_index(a);

  CompensatedSum exact;
  double exact_floor = 0.0;
  std::vector<Task> tasks;

  for (std::size_t i = first; i < segs.size(); ++i) {
    const LogPoint lo = i == first ? a : segs[i].start;
    if (!(lo < b)) break;
    const bool last = i + 1 == segs.size() || b <= segs[i + 1].start;
    const LogPoint hi = last ? b : segs[i + 1].start;
    const double dv = log_distance(lo, hi);
    if (!(dv > 0.0)) {
      if (last) break;
      continue;
    }
    const Piece& body = segs[i].body;
    const double v0 = lo.value();
    const double v1 = v0 + dv;

    Task t;
    t.body = &body;
    t.shift = shift;
    t.weight = weight;
    switch (weight) {
      case Weight::plain:
        t.origin = std::exp(v0);
        t.width = t.origin * std::expm1(dv);
        if (!std::isfinite(t.width) || !std::isfinite(t.origin)) {
          throw DomainError(DomainErrorKind::non_finite,
                            "plain integration range overflows in u");
        }
        break;
      case Weight::log:
        t.origin = v0;
        t.width = dv;
        break;
      case Weight::loglog:
        t.origin = v0;
        t.width = std::log1p(dv / v0);
        break;
    }

    // Constant pieces use the measure directly: differencing a primitive
    // would lose plateau widths far below the ulp of their position.
    if (body.constant) {
      const double c = body.value(t.origin) - shift;
      exact.add(c * t.width);
      exact_floor += 2.0 * kEps * std::fabs(c * t.width);
      if (last) break;
      continue;
    }
    double pa = 0.0, pb = 0.0;
    bool closed = false;
    if (weight == Weight::plain && body.plain_primitive) {
      pa = body.plain_primitive(t.origin);
      pb = body.plain_primitive(t.origin + t.width);
      closed = true;
    } else if (weight == Weight::log && body.log_primitive) {
      pa = body.log_primitive(v0);
      pb = body.log_primitive(v1);
      closed = true;
    } else if (weight == Weight::loglog && body.loglog_primitive) {
      pa = body.loglog_primitive(v0);
      pb = body.loglog_primitive(v1);
      closed = true;
    }
    if (closed) {
      exact.add(pb - pa - shift * t.width);
      exact_floor += 4.0 * kEps *
                     (std::fabs(pa) + std::fabs(pb) + std::fabs(shift * t.width));
      if (last) break;
      continue;
    }
    tasks.push_back(t);
    if (last) break;
  }

  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  std::vector<Panel> frozen;
  double value_sum = exact.value();
  double err_sum = 0.0;
  double mass_sum = 0.0;

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const double h = tasks[t].width / kInitialPanels;
    for (int j = 0; j < kInitialPanels; ++j) {
      Panel p = make_panel(tasks, t, h * j, h, 0);
      value_sum += p.value();
      err_sum += p.err;
      mass_sum += p.mass;
      heap.push(p);
    }
  }

  const auto tolerance = [&](double v) {
    return std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(v));
  };
  const auto floor_of = [&](double mass) { return 8.0 * kEps * mass + exact_floor; };

  std::int64_t live = static_cast<std::int64_t>(heap.size());
  bool converged = true;
  while (!heap.empty()) {
    if (err_sum + floor_of(mass_sum) <= tolerance(value_sum)) break;
    const Panel worst = heap.top();
    if (worst.err == 0.0) {
      converged = false;
      break;
    }
    heap.pop();
    if (worst.depth >= cfg.max_depth) {
      frozen.push_back(worst);
      continue;
    }
    if (live + 1 > cfg.max_panels) {
      heap.push(worst);
      converged = false;
      break;
    }
    auto [l, r] = split(tasks, worst);
    value_sum += l.value() + r.value() - worst.value();
    err_sum += l.err + r.err - worst.err;
    mass_sum += l.mass + r.mass - worst.mass;
    heap.push(l);
    heap.push(r);
    ++live;
    ++out.subdivisions;
  }

  CompensatedSum value(exact.value());
  double err = 0.0;
  double mass = 0.0;
  const auto absorb = [&](const Panel& p) {
    value.add(p.value());
    err += p.err;
    mass += p.mass;
  };
  for (const Panel& p : frozen) absorb(p);
  while (!heap.empty()) {
    absorb(heap.top());
    heap.pop();
  }
  out.value = value.value();
  out.error_estimate = err + floor_of(mass);
  out.converged = converged && out.error_estimate <= tolerance(out.value);
  return out;
}

}  // namespace

QuadResult integrate_log_weighted(const FuncSpec& f, double a, double b,
                                  const QuadConfig& cfg) {
  return integrate(f, LogPoint::of_u(a), LogPoint::of_u(b), cfg, 0.0,
                   Weight::log);
}

QuadResult integrate_log_weighted(const FuncSpec& f, const LogPoint& a,
                                  const LogPoint& b, const QuadConfig& cfg,
                                  double shift) {
  return integrate(f, a, b, cfg, shift, Weight::log);
}

QuadResult integrate_plain(const FuncSpec& f, double a, double b,
                           const QuadConfig& cfg) {
  return integrate(f, LogPoint::of_u(a), LogPoint::of_u(b), cfg, 0.0,
                   Weight::plain);
}

QuadResult integrate_plain(const FuncSpec& f, const LogPoint& a,
                           const LogPoint& b, const QuadConfig& cfg,
                           double shift) {
  return integrate(f, a, b, cfg, shift, Weight::plain);
}

QuadResult integrate_loglog_weighted(const FuncSpec& f, double a, double b,
                                     const QuadConfig& cfg) {
  return integrate(f, LogPoint::of_u(a), LogPoint::of_u(b), cfg, 0.0,
                   Weight::loglog);
}

QuadResult integrate_loglog_weighted(const FuncSpec& f, const LogPoint& a,
                                     const LogPoint& b, const QuadConfig& cfg,
                                     double shift) {
  return integrate(f, a, b, cfg, shift, Weight::loglog);
}

}  // namespace logtauber
