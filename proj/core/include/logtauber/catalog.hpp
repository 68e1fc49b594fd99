#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logtauber/expr.hpp"
#include "logtauber/spec.hpp"

namespace logtauber {

/// Whether a method assigns a limit, and which one when it is known.
struct Summability {
  bool summable = false;
  std::optional<double> limit;
};

struct Truth {
  Summability ordinary;
  Summability c1;
  Summability l1;
  Summability l2;
};

/// Closed-form means. Continuous oracles take log t; discrete ones take n.
struct Oracles {
  std::function<double(double log_t)> sigma;
  std::function<double(double log_t)> tau;
  std::function<double(double log_t)> tau2;
  std::function<double(std::int64_t n)> disc_sigma;
  std::function<double(std::int64_t n)> disc_tau;
};

enum class EntryKind { function, sequence, both };

std::string_view to_string(EntryKind kind) noexcept;

struct CatalogEntry {
  std::string name;
  EntryKind kind = EntryKind::function;
  std::optional<FuncSpec> function;
  /// For functions with a natural sampled counterpart s_k = g(k).
  std::optional<SeqSpec> sequence;
  /// The integrand f when `function` is its running integral.
  std::optional<FuncSpec> integrand;
  Truth truth;
  Oracles oracle;
  /// Abscissae are reported as log t (plateaus live past the double range).
  bool log_abscissa = false;
  std::string notes;

  /// The function when present, else the sequence.
  Spec spec() const;
};

/// "name" or "name(arg)". Throws InvalidArgument for unknown names or
/// malformed arguments.
CatalogEntry catalog_get(std::string_view name);

struct CatalogListing {
  std::string name;
  EntryKind kind;
  std::string truth;
  std::string notes;
};

/// One row per registered entry, parameterised entries shown with their
/// parameter symbol.
std::vector<CatalogListing> catalog_list();

/// "ordinary=no c1=yes(0) ..." for a truth record.
std::string describe(const Truth& truth);

// Plateau function: m e^{2^m} on [e^{2^m}, e^{2^m} + 1], m >= 1, else 0.

/// log1p(e^{-2^m}), the plateau width in log u. Zero once e^{-2^m} underflows.
double thm3_plateau_width(int m);
/// Value at u >= 1, plateau membership decided in log u.
double thm3_value(double u);
/// log of the value at log u; -inf off the plateaus.
double thm3_log_value(const LogPoint& log_u);
/// τ at log t > 0 from the completed and partial plateau masses, each mass
/// k e^{2^k} log1p(e^{-2^k}) taken as k log1p(x)/x with x = e^{-2^k}.
double thm3_tau_closed_form(double log_t);
double thm3_tau_closed_form(const LogPoint& log_t);
/// τ just after plateau m closes: Σ_{k<=m} k log1p(x_k)/x_k / (2^m + w_m).
double thm3_tau_plateau_end(int m);
/// (1/t)∫_t^{t+1} s at t = e^{2^m}; m exactly.
double thm3_sigma_spike(int m);
/// m(m-1)/2^m, the bound on τ over log t in [2^{m-1}, 2^m).
double thm3_block_bound(int m);
/// Block index m with log t in [2^{m-1}, 2^m); requires log t >= 1.
int thm3_block(double log_t);
/// Segment form with plateaus m = 1..9. Evaluation at log u >= 1024 throws.
FuncSpec thm3_function();

/// Seeded random sequence drawn from a fixed set of families (bounded
/// alternating, trigonometric plus logarithmic, power, log-periodic, hashed
/// noise). Same seed, same sequence.
SeqSpec random_sequence(std::uint64_t seed);
/// Seeded random expression text in `var` from a family set valid for it.
std::string random_expression(std::uint64_t seed, Var var);

}  // namespace logtauber
