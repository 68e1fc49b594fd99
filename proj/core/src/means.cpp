#include "logtauber/means.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "logtauber/parallel.hpp"
#include "logtauber/summation.hpp"

namespace logtauber {

std::string_view to_string(MeanKind kind) noexcept {
  switch (kind) {
    case MeanKind::C1:
      return "C1";
    case MeanKind::L1:
      return "L1";
    case MeanKind::L2:
      return "L2";
  }
  return "?";
}

bool MeanSeries::all_converged() const noexcept {
  return std::all_of(points.begin(), points.end(),
                     [](const MeanPoint& p) { return p.converged; });
}

double harmonic(std::int64_t n) {
  if (n < 1) throw InvalidArgument("harmonic(n) needs n >= 1");
  CompensatedSum sum;
  for (std::int64_t k = 1; k <= n; ++k) sum.add(1.0 / static_cast<double>(k));
  return sum.value();
}

double harmonic2(std::int64_t n) {
  if (n < 1) throw InvalidArgument("harmonic2(n) needs n >= 1");
  CompensatedSum ell;
  CompensatedSum sum;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    ell.add(1.0 / kd);
    sum.add(1.0 / (kd * ell.value()));
  }
  return sum.value();
}

namespace {

struct ChannelMean {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

template <class OneChannel>
MeanPoint assemble(const FuncSpec& f, double abscissa, MeanKind kind,
                   OneChannel&& one) {
  MeanPoint p;
  p.abscissa = abscissa;
  p.kind = kind;
  const ChannelMean re = one(f);
  p.value = re.value;
  p.quad_error = re.error;
  p.converged = re.converged;
  if (f.is_complex()) {
    const ChannelMean im = one(f.imag());
    p.value.imag(im.value);
    p.quad_error += im.error;
    p.converged = p.converged && im.converged;
    p.is_complex = true;
  }
  return p;
}

// `inv_scale` is 1/t when t is representable, else exp(-log t).
MeanPoint c1_impl(const FuncSpec& f, const LogPoint& log_t, double abscissa,
                  double inv_scale, const QuadConfig& cfg) {
  if (!(f.log_domain_start() < log_t)) {
    throw InvalidArgument("cont_c1 needs t above the domain start");
  }
  return assemble(f, abscissa, MeanKind::C1, [&](const FuncSpec& ch) {
    const QuadResult q = integrate_plain(ch, ch.log_domain_start(), log_t, cfg);
    return ChannelMean{q.value * inv_scale, q.error_estimate * inv_scale,
                       q.converged};
  });
}

MeanPoint l1_impl(const FuncSpec& f, const LogPoint& log_t, double abscissa,
                  const QuadConfig& cfg) {
  const double norm = log_t.value();
  if (!(norm > 0.0)) throw InvalidArgument("cont_l1 needs t > 1");
  return assemble(f, abscissa, MeanKind::L1, [&](const FuncSpec& ch) {
    const QuadResult q = integrate_log_weighted(ch, LogPoint{}, log_t, cfg);
    return ChannelMean{q.value / norm, q.error_estimate / norm, q.converged};
  });
}

MeanPoint l2_impl(const FuncSpec& f, const LogPoint& log_t, double abscissa,
                  const QuadConfig& cfg) {
  if (!(log_t.value() > 1.0)) throw InvalidArgument("cont_l2 needs t > e");
  const double norm = std::log(log_t.value());
  return assemble(f, abscissa, MeanKind::L2, [&](const FuncSpec& ch) {
    const QuadResult q =
        integrate_loglog_weighted(ch, LogPoint{1.0, 0.0}, log_t, cfg);
    return ChannelMean{q.value / norm, q.error_estimate / norm, q.converged};
  });
}

void require_index(std::int64_t n) {
  if (n < 1) throw InvalidArgument("discrete means need n >= 1");
}

// Accumulates all three discrete means in one pass over k = 1..n.
struct DiscreteAccumulator {
  CompensatedComplexSum plain;
  CompensatedComplexSum harmonic_weighted;
  CompensatedComplexSum harmonic2_weighted;
  CompensatedSum ell;
  CompensatedSum ell2;
  std::int64_t k = 0;

  void step(std::complex<double> sk) {
    ++k;
    const double kd = static_cast<double>(k);
    ell.add(1.0 / kd);
    const double lk = ell.value();
    ell2.add(1.0 / (kd * lk));
    plain.add(sk);
    harmonic_weighted.add(sk / kd);
    harmonic2_weighted.add(sk / (kd * lk));
  }

  std::complex<double> mean(MeanKind kind) const {
    switch (kind) {
      case MeanKind::C1:
        return plain.value() / static_cast<double>(k);
      case MeanKind::L1:
        return harmonic_weighted.value() / ell.value();
      case MeanKind::L2:
        return harmonic2_weighted.value() / ell2.value();
    }
    return {};
  }
};

MeanPoint discrete(const SeqSpec& s, std::int64_t n, MeanKind kind) {
  require_index(n);
  DiscreteAccumulator acc;
  TermStream terms(s, 1, n);
  while (acc.k < n) acc.step(terms.next());
  MeanPoint p;
  p.abscissa = static_cast<double>(n);
  p.kind = kind;
  p.value = acc.mean(kind);
  p.is_complex = s.is_complex();
  return p;
}

std::string config_text(const QuadConfig& cfg) {
  return "quad:" + std::to_string(cfg.abs_tol) + "," +
         std::to_string(cfg.rel_tol) + "," + std::to_string(cfg.max_depth);
}

}  // namespace

MeanPoint cont_c1(const FuncSpec& f, double t, const QuadConfig& cfg) {
  return c1_impl(f, LogPoint::of_u(t), t, 1.0 / t, cfg);
}

MeanPoint cont_c1(const FuncSpec& f, const LogPoint& log_t,
                  const QuadConfig& cfg) {
  return c1_impl(f, log_t, log_t.value(), std::exp(-log_t.value()), cfg);
}

MeanPoint cont_l1(const FuncSpec& f, double t, const QuadConfig& cfg) {
  return l1_impl(f, LogPoint::of_u(t), t, cfg);
}

MeanPoint cont_l1(const FuncSpec& f, const LogPoint& log_t,
                  const QuadConfig& cfg) {
  return l1_impl(f, log_t, log_t.value(), cfg);
}

MeanPoint cont_l2(const FuncSpec& f, double t, const QuadConfig& cfg) {
  return l2_impl(f, LogPoint::of_u(t), t, cfg);
}

MeanPoint cont_l2(const FuncSpec& f, const LogPoint& log_t,
                  const QuadConfig& cfg) {
  return l2_impl(f, log_t, log_t.value(), cfg);
}

MeanPoint disc_c1(const SeqSpec& s, std::int64_t n) {
  return discrete(s, n, MeanKind::C1);
}

MeanPoint disc_l1(const SeqSpec& s, std::int64_t n) {
  return discrete(s, n, MeanKind::L1);
}

MeanPoint disc_l2(const SeqSpec& s, std::int64_t n) {
  return discrete(s, n, MeanKind::L2);
}

MeanSeries mean_series(const Spec& spec, const Grid& grid, MeanKind kind,
                       const QuadConfig& cfg) {
  MeanSeries out;
  out.kind = kind;
  out.fingerprint = fingerprint(describe(spec) + "|" + grid.describe() + "|" +
                                std::string(to_string(kind)) + "|" +
                                config_text(cfg));
  out.points.resize(grid.size());

  if (const auto* seq = std::get_if<SeqSpec>(&spec)) {
    if (!grid.is_integer()) {
      throw InvalidArgument("discrete means need an integer grid");
    }
    grid.require_above(0.0, "a discrete mean");
    DiscreteAccumulator acc;
    const auto last = static_cast<std::int64_t>(
        *std::max_element(grid.points().begin(), grid.points().end()));
    TermStream terms(*seq, 1, last);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto n = static_cast<std::int64_t>(grid[i]);
      while (acc.k < n) acc.step(terms.next());
      MeanPoint& p = out.points[i];
      p.abscissa = grid[i];
      p.kind = kind;
      p.value = acc.mean(kind);
      p.is_complex = seq->is_complex();
    }
    return out;
  }

  const auto& f = std::get<FuncSpec>(spec);
  cfg.validate();
  if (grid.is_log()) {
    grid.require_above(kind == MeanKind::L2 ? 1.0 : 0.0, to_string(kind).data());
  } else {
    grid.require_above(kind == MeanKind::L2 ? std::numbers::e : 1.0,
                       to_string(kind).data());
  }
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = grid[i];
    MeanPoint& p = out.points[i];
    if (grid.is_log()) {
      const LogPoint lt{x, 0.0};
      p = kind == MeanKind::C1   ? cont_c1(f, lt, cfg)
          : kind == MeanKind::L1 ? cont_l1(f, lt, cfg)
                                 : cont_l2(f, lt, cfg);
    } else {
      p = kind == MeanKind::C1   ? cont_c1(f, x, cfg)
          : kind == MeanKind::L1 ? cont_l1(f, x, cfg)
                                 : cont_l2(f, x, cfg);
    }
  });
  return out;
}

namespace {

// Fixed checkpoints x_0 = start, x_{j+1} = x_j + min(x_j / 4, 8). Cumulative
// integrals are appended strictly in order under the mutex.
class RunningIntegral {
 public:
  RunningIntegral(FuncSpec integrand, QuadConfig cfg)
      : f_(std::move(integrand)), cfg_(cfg) {
    points_.push_back(f_.domain_start());
    cumulative_.push_back(0.0);
  }

  double operator()(double u) const {
    if (u < points_.front()) {
      throw DomainError(DomainErrorKind::outside_domain,
                        "running integral below its lower limit");
    }
    double x0 = 0.0;
    double base = 0.0;
    {
      std::lock_guard lock(mutex_);
      while (points_.back() <= u) extend();
      const auto it = std::upper_bound(points_.begin(), points_.end(), u);
      const auto j = static_cast<std::size_t>(it - points_.begin()) - 1;
      x0 = points_[j];
      base = cumulative_[j];
    }
    if (u == x0) return base;
    const QuadResult q = integrate_plain(f_, x0, u, cfg_);
    if (!q.converged) {
      throw ConvergenceError("integral_mode: quadrature did not converge");
    }
    return base + q.value;
  }

 private:
  void extend() const {
    const double x0 = points_.back();
    const double x1 = x0 + std::min(0.25 * x0, 8.0);
    const QuadResult q = integrate_plain(f_, x0, x1, cfg_);
    if (!q.converged) {
      throw ConvergenceError("integral_mode: checkpoint integral did not converge");
    }
    points_.push_back(x1);
    cumulative_.push_back(cumulative_.back() + q.value);
  }

  FuncSpec f_;
  QuadConfig cfg_;
  mutable std::mutex mutex_;
  mutable std::vector<double> points_;
  mutable std::vector<double> cumulative_;
};

FuncSpec running_integral_of(const FuncSpec& integrand, const QuadConfig& cfg) {
  auto state = std::make_shared<const RunningIntegral>(integrand, cfg);
  Piece p;
  p.value = [state](double u) { return (*state)(u); };
  p.text = "integral(" + integrand.describe() + ")";
  std::vector<Segment> segs;
  segs.push_back({integrand.log_domain_start(), std::move(p)});
  return FuncSpec(std::move(segs), "integral(" + integrand.describe() + ")");
}

}  // namespace

FuncSpec integral_mode(const FuncSpec& integrand, const QuadConfig& cfg) {
  cfg.validate();
  if (!integrand.is_complex()) {
    FuncSpec re = integrand;
    return running_integral_of(re, cfg);
  }
  FuncSpec re(integrand.segments(), integrand.name());
  return running_integral_of(re, cfg).with_imag(
      running_integral_of(integrand.imag(), cfg));
}

}  // namespace logtauber
