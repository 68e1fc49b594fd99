#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace logtauber {

/// Raised for malformed expression text. `offset` is a byte offset into the
/// parsed string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class DomainErrorKind {
  log_of_non_positive,
  negative_base_fractional_exponent,
  non_finite,
  outside_domain,
  index_out_of_range,
};

/// Evaluation outside the domain of a spec or an expression node. For
/// expression errors `offset` points at the offending node in the source
/// text; for other errors it is 0.
class DomainError : public std::runtime_error {
 public:
  DomainError(DomainErrorKind kind, const std::string& what,
              std::size_t offset = 0)
      : std::runtime_error(what), kind_(kind), offset_(offset) {}

  DomainErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  DomainErrorKind kind_;
  std::size_t offset_;
};

/// Precondition violations on arguments (λ on the wrong side of 1, empty
/// grids, n < 1, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised where a quadrature failure cannot be reported softly, e.g. inside
/// the running integral of integral_mode.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logtauber
