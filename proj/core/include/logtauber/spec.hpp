#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "logtauber/expr.hpp"

namespace logtauber {

/// A point on the log-u axis stored as `base + offset`.
///
/// Catalog plateaus sit at log u = 2^m with widths log1p(e^{-2^m}); storing
/// the width separately keeps segment lengths exact where `2^m + width`
/// would round back to `2^m`.
struct LogPoint {
  double base = 0.0;
  double offset = 0.0;

  static LogPoint of_u(double u);
  double value() const noexcept { return base + offset; }
  double u() const;
};

/// (b - a), grouped so that points sharing a base subtract exactly.
double log_distance(const LogPoint& a, const LogPoint& b) noexcept;
bool operator<(const LogPoint& a, const LogPoint& b) noexcept;
bool operator<=(const LogPoint& a, const LogPoint& b) noexcept;

/// One segment body of a piecewise function. `value` is mandatory; the
/// primitives are optional closed forms that quadrature uses verbatim.
struct Piece {
  std::function<double(double u)> value;
  /// P(u) with P' = s.
  std::function<double(double u)> plain_primitive;
  /// F(v) with dF/dv = s(e^v); i.e. the antiderivative of s(u)/u in v = log u.
  std::function<double(double v)> log_primitive;
  /// G(v) with dG/dv = s(e^v)/v; the antiderivative of s(u)/(u log u).
  std::function<double(double v)> loglog_primitive;
  /// Human-readable body, used in fingerprints and listings.
  std::string text;
  /// True when `value` ignores its argument.
  bool constant = false;

  static Piece of_expr(Expr e);
  static Piece of_constant(double c);
};

struct Segment {
  LogPoint start;
  Piece body;
};

/// A real function on [domain_start, inf) given by contiguous half-open
/// segments [a_i, a_{i+1}); the last segment is unbounded. An optional
/// imaginary channel makes the function complex-valued.
class FuncSpec {
 public:
  FuncSpec() = default;

  /// Segments must be sorted with strictly increasing starts. The first start
  /// is the domain start. Each segment is spot-checked at a few interior
  /// points and must evaluate finite there.
  explicit FuncSpec(std::vector<Segment> segments, std::string name = {});

  static FuncSpec single(Piece body, double domain_start = 1.0,
                         std::string name = {});
  static FuncSpec of_expr(std::string_view text, double domain_start = 1.0);

  /// Builds from (breakpoint, expression) pairs in u; breakpoints ascending.
  static FuncSpec piecewise(
      const std::vector<std::pair<double, std::string>>& pieces);

  FuncSpec with_imag(FuncSpec imag) const;

  double eval(double u) const;
  double eval_log(const LogPoint& log_u) const;
  std::complex<double> eval_complex(double u) const;

  /// Index of the segment containing log u.
  std::size_t segment_index(const LogPoint& log_u) const;

  double domain_start() const;
  const LogPoint& log_domain_start() const { return segments_.front().start; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  bool is_complex() const noexcept { return imag_ != nullptr; }
  const FuncSpec& imag() const { return *imag_; }
  const std::string& name() const noexcept { return name_; }

  std::string describe() const;

 private:
  std::vector<Segment> segments_;
  std::shared_ptr<const FuncSpec> imag_;
  std::string name_;
};

/// Deterministic real sequence s_k, k >= 1, from an expression in k, an
/// explicit finite list, or a native generator. Optional imaginary channel.
class SeqSpec {
 public:
  SeqSpec() = default;

  static SeqSpec of_expr(std::string_view text);
  static SeqSpec of_list(std::vector<double> values, std::string name = {});
  static SeqSpec of_function(std::function<double(std::int64_t)> fn,
                             std::string name);

  SeqSpec with_imag(SeqSpec imag) const;

  /// Throws DomainError past the end of an explicit list or for k < 1.
  double term(std::int64_t k) const;
  std::complex<double> term_complex(std::int64_t k) const;

  /// Real parts of terms first, first+1, ..., first+count-1.
  void terms(std::int64_t first, std::size_t count, double* out) const;

  bool is_complex() const noexcept { return imag_ != nullptr; }
  const SeqSpec& imag() const { return *imag_; }
  const std::string& name() const noexcept { return name_; }
  std::string describe() const;

 private:
  using Source =
      std::variant<Expr, std::vector<double>,
                   std::function<double(std::int64_t)>>;
  std::shared_ptr<const Source> source_;
  std::shared_ptr<const SeqSpec> imag_;
  std::string name_;
};

/// Terms s_first, ..., s_last in order, evaluated a block at a time.
class TermStream {
 public:
  TermStream(const SeqSpec& s, std::int64_t first, std::int64_t last);
  std::complex<double> next();

 private:
  void refill();

  const SeqSpec* s_;
  std::int64_t k_;
  std::int64_t last_;
  std::size_t pos_ = 0;
  std::size_t size_ = 0;
  std::array<double, Expr::kBlock> re_{};
  std::array<double, Expr::kBlock> im_{};
};

using Spec = std::variant<SeqSpec, FuncSpec>;

std::string describe(const Spec& spec);

/// 64-bit FNV-1a over a byte string; used for spec fingerprints.
std::uint64_t fingerprint(std::string_view text) noexcept;

}  // namespace logtauber
