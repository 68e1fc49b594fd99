#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logtauber/grid.hpp"
#include "logtauber/quadrature.hpp"
#include "logtauber/spec.hpp"

namespace logtauber {

enum class WindowSide {
  upper,  ///< (t, t^λ], λ > 1
  lower,  ///< (t^λ, t], 0 < λ < 1
};

/// Normalized average of s(u) - s(t) (upper) or s(t) - s(u) (lower) over a
/// window. Continuous windows are normalized by |λ - 1| log t; discrete
/// windows carry three views of the same sum.
struct WindowAvg {
  double abscissa = 0.0;
  double lambda = 0.0;
  WindowSide side = WindowSide::upper;
  /// Literal normalization: (λ-1) log t continuous, |[n^λ] - n| ℓ_n discrete.
  std::complex<double> value;
  /// Raw integral / sum of differences before normalization.
  std::complex<double> sum;
  /// Sum divided by the harmonic mass of the window, Σ_{k in window} 1/k.
  /// Equal to `value` for continuous windows.
  std::complex<double> measure_normalized;
  double quad_error = 0.0;
  bool converged = true;
  bool empty = false;
};

/// The integer window of n for exponent λ. Upper: {n+1, ..., [n^λ]}.
/// Lower: {[n^λ]+1, ..., n}. Membership is decided by the single predicate
/// `log k <= λ log n` (with a 1e-12 relative tie allowance), so the
/// "[n^λ]" and the "log k / log n <= λ" descriptions coincide.
class DiscreteWindow {
 public:
  /// [n^λ] computed through the shared membership predicate.
  static std::int64_t floor_power(std::int64_t n, double lambda);
  static bool admits(std::int64_t k, std::int64_t n, double lambda);

  static DiscreteWindow of(std::int64_t n, double lambda);
  /// Same window, built by scanning k with the log-ratio predicate.
  static DiscreteWindow by_log_ratio(std::int64_t n, double lambda);

  std::int64_t first() const noexcept { return first_; }
  std::int64_t last() const noexcept { return last_; }
  std::int64_t n() const noexcept { return n_; }
  double lambda() const noexcept { return lambda_; }
  WindowSide side() const noexcept { return side_; }
  bool empty() const noexcept { return last_ < first_; }
  std::int64_t size() const noexcept { return empty() ? 0 : last_ - first_ + 1; }

 private:
  std::int64_t n_ = 0;
  double lambda_ = 0.0;
  WindowSide side_ = WindowSide::upper;
  std::int64_t first_ = 1;
  std::int64_t last_ = 0;
};

/// (1/((λ-1) log t)) ∫_t^{t^λ} (s(u) - s(t))/u du. The upper limit is only
/// ever handled as λ log t, so t^λ may exceed the double range.
WindowAvg window_avg_upper(const FuncSpec& f, double t, double lambda,
                           const QuadConfig& cfg = {});
WindowAvg window_avg_upper(const FuncSpec& f, const LogPoint& log_t,
                           double lambda, const QuadConfig& cfg = {});

/// (1/((1-λ) log t)) ∫_{t^λ}^t (s(t) - s(u))/u du.
WindowAvg window_avg_lower(const FuncSpec& f, double t, double lambda,
                           const QuadConfig& cfg = {});
WindowAvg window_avg_lower(const FuncSpec& f, const LogPoint& log_t,
                           double lambda, const QuadConfig& cfg = {});

/// (1/(([n^λ]-n) ℓ_n)) Σ_{k=n+1}^{[n^λ]} (s_k - s_n)/k. Empty windows are
/// returned flagged with zero sums.
WindowAvg disc_window_upper(const SeqSpec& s, std::int64_t n, double lambda);
/// (1/((n-[n^λ]) ℓ_n)) Σ_{k=[n^λ]+1}^{n} (s_n - s_k)/k.
WindowAvg disc_window_lower(const SeqSpec& s, std::int64_t n, double lambda);

/// min over the window of s(u) - s(t) (real channel). nullopt for an empty
/// discrete window. Continuous windows are probed at 256 log-uniform points
/// plus every segment breakpoint inside the window.
std::optional<double> slow_decrease_margin(const SeqSpec& s, std::int64_t n,
                                           double lambda);
std::optional<double> slow_decrease_margin(const FuncSpec& f, double t,
                                           double lambda);
std::optional<double> slow_decrease_margin(const SeqSpec& s,
                                           const DiscreteWindow& window);

/// max over the window of |s(u) - s(t)| (complex modulus when complex).
std::optional<double> slow_osc_modulus(const SeqSpec& s, std::int64_t n,
                                       double lambda);
std::optional<double> slow_osc_modulus(const FuncSpec& f, double t,
                                       double lambda);

/// Probe abscissae (as log u) used by the continuous margin and modulus.
std::vector<LogPoint> window_probes(const FuncSpec& f, const LogPoint& log_t,
                                    double lambda);

struct IntegrandCheck {
  std::vector<double> x_grid;
  double x0 = 1.0;
  double bound = 0.0;
  /// min of x log x f(x) over the grid (real channel).
  double min_weighted = 0.0;
  /// max of x log x |f(x)| over the grid.
  double max_abs_weighted = 0.0;
  bool one_sided_holds = false;  ///< min >= -C
  bool two_sided_holds = false;  ///< max <= C
};

IntegrandCheck integrand_conditions(const FuncSpec& f, double x0,
                                    const std::vector<double>& x_grid, double C);

struct ProfileCell {
  double abscissa = 0.0;
  std::complex<double> value;
  double quad_error = 0.0;
  bool converged = true;
  bool empty = false;
};

/// One λ row of a window-condition matrix plus its tail aggregates.
struct ProfileRow {
  double lambda = 0.0;
  std::vector<ProfileCell> cells;
  /// Infimum of Re(value) over the non-empty tail cells (real conditions).
  std::optional<double> tail_inf;
  /// Supremum of |value| over the non-empty tail cells (complex conditions).
  std::optional<double> tail_sup_abs;
};

/// One λ row of slow-decrease margins or slow-oscillation moduli.
struct ModulusRow {
  double lambda = 0.0;
  std::vector<std::optional<double>> cells;
  std::optional<double> tail_inf;
  std::optional<double> tail_sup;
};

struct VerdictEntry {
  /// Short condition label, e.g. "upper_window_inf".
  std::string condition;
  double lambda = 0.0;
  std::optional<double> aggregate;
};

struct ConditionTrend {
  std::string condition;
  /// Aggregates ordered from the λ farthest from 1 to the closest.
  std::vector<VerdictEntry> entries;
  /// True when the aggregate moves monotonically toward the condition's
  /// target (non-decreasing for infima, non-increasing for suprema) as λ→1.
  bool improves_toward_one = false;
  /// Descriptive summary; never claims that a limit condition holds.
  std::string summary;
};

struct TauberianReport {
  bool discrete = false;
  bool is_complex = false;
  std::vector<double> abscissae;
  std::size_t tail = 0;
  std::vector<ProfileRow> upper;
  std::vector<ProfileRow> lower;
  /// Discrete only: the literal count normalization |[n^λ]-n| ℓ_n. The
  /// `upper`/`lower` rows of a discrete report hold the harmonic-mass
  /// normalization.
  std::vector<ProfileRow> upper_literal;
  std::vector<ProfileRow> lower_literal;
  std::vector<ModulusRow> sd_margin;
  std::vector<ModulusRow> so_modulus;
  std::vector<ConditionTrend> verdict;
};

struct ProfileOptions {
  std::vector<double> lambdas_upper = {2.0, 1.5, 1.25, 1.1, 1.05, 1.01};
  std::vector<double> lambdas_lower = {1.0 / 2.0, 1.0 / 1.5, 1.0 / 1.25,
                                       1.0 / 1.1, 1.0 / 1.05, 1.0 / 1.01};
  /// Number of trailing abscissae aggregated; 0 selects 25% of the grid
  /// (at least one point).
  std::size_t tail = 0;
  QuadConfig quad;
};

/// Window-condition profile over (λ, abscissa). Cells are independent and
/// computed in parallel; rows are assembled in grid order.
TauberianReport condition_profile(const Spec& spec, const Grid& grid,
                                  const ProfileOptions& options = {});

/// Recomputes the verdict from the stored rows.
std::vector<ConditionTrend> derive_verdict(const TauberianReport& report);

}  // namespace logtauber
