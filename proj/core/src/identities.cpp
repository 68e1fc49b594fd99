#include "logtauber/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logtauber/errors.hpp"
#include "logtauber/means.hpp"
#include "logtauber/summation.hpp"
#include "logtauber/tauberian.hpp"

namespace logtauber {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::complex<double> value_at(const FuncSpec& f, const LogPoint& p) {
  return {f.eval_log(p), f.is_complex() ? f.imag().eval_log(p) : 0.0};
}

std::complex<double> term(const SeqSpec& s, std::int64_t k) {
  return s.is_complex() ? s.term_complex(k) : std::complex<double>(s.term(k));
}

void finish_continuous(IdentityResidual& r) {
  r.residual = std::abs(r.lhs - r.rhs);
  r.normalizer = 1.0 + std::abs(r.lhs);
  r.budget = std::min(kContinuousBudgetFactor * (r.combined_error + r.rounding_floor),
                      kContinuousBudgetCap);
  if (!r.converged) {
    r.status = IdentityStatus::unverified;
  } else {
    r.status = r.residual <= r.budget ? IdentityStatus::ok : IdentityStatus::exceeded;
  }
}

void finish_discrete(IdentityResidual& r) {
  r.residual = std::abs(r.lhs - r.rhs);
  r.normalizer = 1.0 + std::abs(r.lhs);
  r.budget = kDiscreteBudget * r.normalizer;
  r.status = r.residual <= r.budget ? IdentityStatus::ok : IdentityStatus::exceeded;
}

IdentityResidual lemma1(const FuncSpec& f, const LogPoint& log_t, double lambda,
                        const QuadConfig& cfg, bool upper) {
  if (upper ? !(lambda > 1.0) : !(lambda > 0.0 && lambda < 1.0)) {
    throw InvalidArgument(upper ? "upper identity needs lambda > 1"
                                : "lower identity needs 0 < lambda < 1");
  }
  if (!(log_t.value() > 0.0)) throw InvalidArgument("identity needs t > 1");

  IdentityResidual r;
  r.abscissa = log_t.value();
  r.lambda = lambda;

  // Left side from the means.
  const std::complex<double> st = value_at(f, log_t);
  const MeanPoint tau = cont_l1(f, log_t, cfg);
  r.lhs = st - tau.value;

  // Right side from τ at t^λ and the window average.
  const LogPoint log_tl{log_t.base * lambda, log_t.offset * lambda};
  const MeanPoint tau_l = cont_l1(f, log_tl, cfg);
  const double rho = lambda / std::fabs(lambda - 1.0);
  WindowAvg w;
  if (upper) {
    w = window_avg_upper(f, log_t, lambda, cfg);
    r.rhs = rho * (tau_l.value - tau.value) - w.value;
  } else {
    w = window_avg_lower(f, log_t, lambda, cfg);
    r.rhs = rho * (tau.value - tau_l.value) + w.value;
  }

  r.combined_error =
      tau.quad_error + rho * (tau_l.quad_error + tau.quad_error) + w.quad_error;
  r.rounding_floor =
      8.0 * kEps *
      (std::abs(st) + std::abs(tau.value) +
       rho * (std::abs(tau_l.value) + std::abs(tau.value)) + std::abs(w.value));
  r.converged = tau.converged && tau_l.converged && w.converged;
  finish_continuous(r);
  return r;
}

// Σ_{k≤N} s_k/k and ℓ_N, plus ℓ_n for the inner index n < N or n > N.
struct PrefixSums {
  std::complex<double> weighted_far;
  double ell_far = 0.0;
  double ell_near = 0.0;
};

PrefixSums prefix_sums(const SeqSpec& s, std::int64_t near, std::int64_t far) {
  CompensatedComplexSum weighted;
  CompensatedSum ell;
  PrefixSums out;
  const std::int64_t stop = std::max(near, far);
  TermStream terms(s, 1, far);
  for (std::int64_t k = 1; k <= stop; ++k) {
    const double kd = static_cast<double>(k);
    if (k <= far) weighted.add(terms.next() / kd);
    ell.add(1.0 / kd);
    if (k == near) out.ell_near = ell.value();
    if (k == far) out.ell_far = ell.value();
  }
  out.weighted_far = weighted.value();
  return out;
}

IdentityResidual lemma2(const SeqSpec& s, std::int64_t n, double lambda,
                        bool upper) {
  if (upper ? !(lambda > 1.0) : !(lambda > 0.0 && lambda < 1.0)) {
    throw InvalidArgument(upper ? "upper identity needs lambda > 1"
                                : "lower identity needs 0 < lambda < 1");
  }
  const DiscreteWindow window = DiscreteWindow::of(n, lambda);
  if (window.empty()) {
    throw InvalidArgument("identity window is empty for n = " + std::to_string(n));
  }
  const std::int64_t far = DiscreteWindow::floor_power(n, lambda);

  IdentityResidual r;
  r.abscissa = static_cast<double>(n);
  r.lambda = lambda;

  const MeanPoint tau_n = disc_l1(s, n);
  r.lhs = term(s, n) - tau_n.value;

  const PrefixSums p = prefix_sums(s, n, far);
  const std::complex<double> tau_far = p.weighted_far / p.ell_far;
  if (upper) {
    const WindowAvg w = disc_window_upper(s, n, lambda);
    const double gap = p.ell_far - p.ell_near;
    r.rhs = (p.ell_far / gap) * (tau_far - tau_n.value) - w.sum / gap;
  } else {
    const WindowAvg w = disc_window_lower(s, n, lambda);
    const double gap = p.ell_near - p.ell_far;
    r.rhs = (p.ell_far / gap) * (tau_n.value - tau_far) + w.sum / gap;
  }
  finish_discrete(r);
  return r;
}

}  // namespace

std::string_view to_string(IdentityStatus status) noexcept {
  switch (status) {
    case IdentityStatus::ok:
      return "ok";
    case IdentityStatus::exceeded:
      return "exceeded";
    case IdentityStatus::unverified:
      return "unverified";
  }
  return "?";
}

IdentityResidual lemma1_upper_residual(const FuncSpec& f, double t,
                                       double lambda, const QuadConfig& cfg) {
  IdentityResidual r = lemma1(f, LogPoint::of_u(t), lambda, cfg, true);
  r.abscissa = t;
  return r;
}

IdentityResidual lemma1_upper_residual(const FuncSpec& f, const LogPoint& log_t,
                                       double lambda, const QuadConfig& cfg) {
  return lemma1(f, log_t, lambda, cfg, true);
}

IdentityResidual lemma1_lower_residual(const FuncSpec& f, double t,
                                       double lambda, const QuadConfig& cfg) {
  IdentityResidual r = lemma1(f, LogPoint::of_u(t), lambda, cfg, false);
  r.abscissa = t;
  return r;
}

IdentityResidual lemma1_lower_residual(const FuncSpec& f, const LogPoint& log_t,
                                       double lambda, const QuadConfig& cfg) {
  return lemma1(f, log_t, lambda, cfg, false);
}

IdentityResidual lemma1_residual(const FuncSpec& f, const LogPoint& log_t,
                                 double lambda, const QuadConfig& cfg) {
  return lemma1(f, log_t, lambda, cfg, lambda > 1.0);
}

IdentityResidual lemma2_upper_residual(const SeqSpec& s, std::int64_t n,
                                       double lambda) {
  return lemma2(s, n, lambda, true);
}

IdentityResidual lemma2_lower_residual(const SeqSpec& s, std::int64_t n,
                                       double lambda) {
  return lemma2(s, n, lambda, false);
}

IdentityResidual lemma2_residual(const SeqSpec& s, std::int64_t n, double lambda) {
  return lemma2(s, n, lambda, lambda > 1.0);
}

ToeplitzBounds toeplitz_bounds(std::int64_t m) {
  if (m < 2) throw InvalidArgument("toeplitz_bounds needs m >= 2");
  CompensatedSum ell;
  for (std::int64_t k = 1; k < m; ++k) ell.add(1.0 / static_cast<double>(k));
  const double ell_prev = ell.value();
  ell.add(1.0 / static_cast<double>(m));
  const double log_m = std::log(static_cast<double>(m));
  return {(ell.value() - 1.0) / log_m, ell_prev / log_m};
}

}  // namespace logtauber
