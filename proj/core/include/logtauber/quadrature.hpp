#pragma once

#include <cstdint>

#include "logtauber/spec.hpp"

namespace logtauber {

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 60;
  /// Hard cap on the number of live panels across all segments.
  std::int64_t max_panels = 1 << 20;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  /// Richardson estimate |S_fine - S_coarse| / 15 summed over panels (floored
  /// by the estimate one level coarser, divided by 16), plus a
  /// floating-point rounding floor proportional to the summed magnitude.
  double error_estimate = 0.0;
  bool converged = true;
  std::int64_t subdivisions = 0;
};

/// ∫_a^b s(u)/u du, integrated in v = log u. Segments are split at every
/// breakpoint in (a, b); segments carrying a closed-form primitive are used
/// exactly. `shift` is subtracted from s before integrating.
QuadResult integrate_log_weighted(const FuncSpec& f, double a, double b,
                                  const QuadConfig& cfg = {});
QuadResult integrate_log_weighted(const FuncSpec& f, const LogPoint& a,
                                  const LogPoint& b, const QuadConfig& cfg,
                                  double shift = 0.0);

/// ∫_a^b s(u) du in u, with segment pieces parameterised by their offset
/// from the piece start so that unit-width plateaus at huge u keep their
/// width.
QuadResult integrate_plain(const FuncSpec& f, double a, double b,
                           const QuadConfig& cfg = {});
QuadResult integrate_plain(const FuncSpec& f, const LogPoint& a,
                           const LogPoint& b, const QuadConfig& cfg,
                           double shift = 0.0);

/// ∫_a^b s(u)/(u log u) du, integrated in w = log log u. Requires a > 1.
QuadResult integrate_loglog_weighted(const FuncSpec& f, double a, double b,
                                     const QuadConfig& cfg = {});
QuadResult integrate_loglog_weighted(const FuncSpec& f, const LogPoint& a,
                                     const LogPoint& b, const QuadConfig& cfg,
                                     double shift = 0.0);

}  // namespace logtauber
