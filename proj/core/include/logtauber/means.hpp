#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "logtauber/grid.hpp"
#include "logtauber/quadrature.hpp"
#include "logtauber/spec.hpp"

namespace logtauber {

/// C1: Cesàro σ. L1: logarithmic τ. L2: second-order logarithmic τ₂.
enum class MeanKind { C1, L1, L2 };

std::string_view to_string(MeanKind kind) noexcept;

struct MeanPoint {
  /// t, n, or log t depending on the grid it came from.
  double abscissa = 0.0;
  std::complex<double> value;
  /// Propagated quadrature error estimate of `value`; 0 for discrete means.
  double quad_error = 0.0;
  MeanKind kind = MeanKind::L1;
  bool converged = true;
  bool is_complex = false;
};

struct MeanSeries {
  std::vector<MeanPoint> points;
  MeanKind kind = MeanKind::L1;
  std::uint64_t fingerprint = 0;

  bool all_converged() const noexcept;
};

/// ℓ_n = Σ_{k≤n} 1/k by compensated forward summation.
double harmonic(std::int64_t n);
/// ℓ_n(2) = Σ_{k≤n} 1/(k ℓ_k).
double harmonic2(std::int64_t n);

/// σ(t) = (1/t)∫_{start}^t s(u) du. The lower limit is the domain start.
MeanPoint cont_c1(const FuncSpec& f, double t, const QuadConfig& cfg = {});
MeanPoint cont_c1(const FuncSpec& f, const LogPoint& log_t,
                  const QuadConfig& cfg = {});

/// τ(t) = (1/log t)∫_1^t s(u)/u du.
MeanPoint cont_l1(const FuncSpec& f, double t, const QuadConfig& cfg = {});
MeanPoint cont_l1(const FuncSpec& f, const LogPoint& log_t,
                  const QuadConfig& cfg = {});

/// τ₂(t) = (1/log log t)∫_e^t s(u)/(u log u) du.
MeanPoint cont_l2(const FuncSpec& f, double t, const QuadConfig& cfg = {});
MeanPoint cont_l2(const FuncSpec& f, const LogPoint& log_t,
                  const QuadConfig& cfg = {});

MeanPoint disc_c1(const SeqSpec& s, std::int64_t n);
MeanPoint disc_l1(const SeqSpec& s, std::int64_t n);
MeanPoint disc_l2(const SeqSpec& s, std::int64_t n);

/// One MeanPoint per grid point, in grid order. Continuous points are
/// evaluated in parallel; discrete kinds make one pass to the largest n.
MeanSeries mean_series(const Spec& spec, const Grid& grid, MeanKind kind,
                       const QuadConfig& cfg = {});

/// s(u) = ∫_{start}^u f(x) dx as a FuncSpec on the integrand's domain.
///
/// Evaluation integrates from the nearest fixed checkpoint below u. The
/// cumulative value at each checkpoint is cached on first use, in order, so a
/// given u always produces the same bits regardless of evaluation order or
/// thread. Throws ConvergenceError if a checkpoint integral fails.
FuncSpec integral_mode(const FuncSpec& integrand, const QuadConfig& cfg = {});

}  // namespace logtauber
