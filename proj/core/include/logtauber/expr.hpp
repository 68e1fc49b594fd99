#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "logtauber/errors.hpp"

namespace logtauber {

/// The single free variable an expression may reference: `u` for functions,
/// `k` for sequences, `x` for integrands.
enum class Var : char { u = 'u', k = 'k', x = 'x' };

char var_name(Var v) noexcept;

enum class NodeKind : std::uint8_t {
  number,
  variable,
  constant_e,
  constant_pi,
  negate,
  add,
  subtract,
  multiply,
  divide,
  power,
  call,
};

enum class Function : std::uint8_t {
  sin,
  cos,
  exp,
  log,
  log1p,
  abs,
  floor,
  pow,
};

std::string_view function_name(Function f) noexcept;
int function_arity(Function f) noexcept;

/// Immutable arithmetic expression in one variable.
///
/// Grammar (see docs/expression_grammar.md):
///
///     expr    := term   (("+" | "-") term)*
///     term    := unary  (("*" | "/") unary)*
///     unary   := "-" unary | power
///     power   := primary ("^" unary)?
///     primary := number | name | name "(" args ")" | "(" expr ")"
///
/// `^` binds tighter than unary minus and is right-associative, so `-2^2`
/// is -4 and `2^3^2` is 512.
class Expr {
 public:
  struct Node {
    NodeKind kind = NodeKind::number;
    Function fn = Function::sin;
    double number = 0.0;
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;
    std::size_t offset = 0;
  };

  static Expr parse(std::string_view text, Var allowed_var);

  /// Throws DomainError for log of a non-positive argument, a negative base
  /// raised to a non-integral power, or any non-finite intermediate. The
  /// error offset points at the responsible node.
  double eval(double value) const;

  static constexpr std::size_t kBlock = 128;

  /// out[i] = eval(x[i]) for count <= kBlock values, with the same errors.
  void eval_block(const double* x, double* out, std::size_t count) const;

  /// Minimal-parenthesis rendering that reparses to the same tree.
  std::string to_string() const;

  /// Structural equality, ignoring source offsets.
  bool same_tree(const Expr& other) const;

  Var variable() const noexcept { return var_; }
  const std::string& source() const noexcept { return source_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::int32_t root() const noexcept { return root_; }

 private:
  friend class ExprParser;

  struct Instr;
  void flatten();
  void emit(std::vector<Instr>& out, std::int32_t i, std::size_t depth,
            std::size_t& need) const;
  bool has_variable(std::int32_t i) const;
  std::size_t tree_depth(std::int32_t i) const;
  double eval_node(std::int32_t i, double value) const;
  void print_node(std::int32_t i, std::string& out) const;
  bool same_node(std::int32_t a, const Expr& other, std::int32_t b) const;

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  std::shared_ptr<const std::vector<Instr>> program_;  // post-order
  bool flat_ok_ = false;
  Var var_ = Var::u;
  std::string source_;
};

}  // namespace logtauber
