#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

#include "logtauber/quadrature.hpp"
#include "logtauber/spec.hpp"

namespace logtauber {

enum class IdentityStatus {
  ok,
  /// Residual above its budget.
  exceeded,
  /// A quadrature on either side did not converge.
  unverified,
};

std::string_view to_string(IdentityStatus status) noexcept;

struct IdentityResidual {
  double abscissa = 0.0;
  double lambda = 0.0;
  std::complex<double> lhs;
  std::complex<double> rhs;
  double residual = 0.0;  ///< |lhs - rhs|
  double normalizer = 1.0;  ///< 1 + |lhs|
  /// Quadrature error estimate of lhs plus the propagated estimate of rhs.
  /// Zero for the discrete identities.
  double combined_error = 0.0;
  /// Floating-point rounding allowance for the arithmetic combining the terms.
  double rounding_floor = 0.0;
  /// Largest residual accepted as agreement.
  double budget = 0.0;
  bool converged = true;
  IdentityStatus status = IdentityStatus::ok;
};

/// Continuous budgets: residual <= 10 (combined_error + rounding_floor) and
/// residual <= 1e-6.
inline constexpr double kContinuousBudgetFactor = 10.0;
inline constexpr double kContinuousBudgetCap = 1e-6;
/// Discrete budget: residual <= 1e-12 (1 + |lhs|).
inline constexpr double kDiscreteBudget = 1e-12;

/// s(t) - τ(t) against (λ/(λ-1))(τ(t^λ) - τ(t)) - upper window average.
/// λ > 1, t > 1.
IdentityResidual lemma1_upper_residual(const FuncSpec& f, double t,
                                       double lambda, const QuadConfig& cfg = {});
IdentityResidual lemma1_upper_residual(const FuncSpec& f, const LogPoint& log_t,
                                       double lambda, const QuadConfig& cfg = {});

/// s(t) - τ(t) against (λ/(1-λ))(τ(t) - τ(t^λ)) + lower window average.
/// 0 < λ < 1, t > 1.
IdentityResidual lemma1_lower_residual(const FuncSpec& f, double t,
                                       double lambda, const QuadConfig& cfg = {});
IdentityResidual lemma1_lower_residual(const FuncSpec& f, const LogPoint& log_t,
                                       double lambda, const QuadConfig& cfg = {});

/// Dispatches on the side of 1 that λ lies.
IdentityResidual lemma1_residual(const FuncSpec& f, const LogPoint& log_t,
                                 double lambda, const QuadConfig& cfg = {});

/// s_n - τ_n against the discrete representation over {n+1, ..., [n^λ]}.
/// Throws InvalidArgument for an empty window.
IdentityResidual lemma2_upper_residual(const SeqSpec& s, std::int64_t n,
                                       double lambda);
/// Mirror over {[n^λ]+1, ..., n}.
IdentityResidual lemma2_lower_residual(const SeqSpec& s, std::int64_t n,
                                       double lambda);
IdentityResidual lemma2_residual(const SeqSpec& s, std::int64_t n, double lambda);

struct ToeplitzBounds {
  double lower = 0.0;  ///< (ℓ_m - 1)/log m
  double upper = 0.0;  ///< ℓ_{m-1}/log m
};

/// Row-sum sandwich of the harmonic Toeplitz matrix. m >= 2.
ToeplitzBounds toeplitz_bounds(std::int64_t m);

}  // namespace logtauber
