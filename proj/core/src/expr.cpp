#include "logtauber/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <memory>
#include <utility>
#include <vector>

namespace logtauber {

char var_name(Var v) noexcept { return static_cast<char>(v); }

namespace {

struct FunctionInfo {
  std::string_view name;
  Function fn;
  int arity;
};

constexpr std::array<FunctionInfo, 8> kFunctions{{
    {"sin", Function::sin, 1},
    {"cos", Function::cos, 1},
    {"exp", Function::exp, 1},
    {"log", Function::log, 1},
    {"log1p", Function::log1p, 1},
    {"abs", Function::abs, 1},
    {"floor", Function::floor, 1},
    {"pow", Function::pow, 2},
}};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& info : kFunctions) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Binding strength used by the printer.
int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::add:
    case NodeKind::subtract:
      return 1;
    case NodeKind::multiply:
    case NodeKind::divide:
      return 2;
    case NodeKind::negate:
      return 3;
    case NodeKind::power:
      return 4;
    default:
      return 5;
  }
}

}  // namespace

std::string_view function_name(Function f) noexcept {
  for (const auto& info : kFunctions) {
    if (info.fn == f) return info.name;
  }
  return "?";
}

int function_arity(Function f) noexcept {
  for (const auto& info : kFunctions) {
    if (info.fn == f) return info.arity;
  }
  return 0;
}

class ExprParser {
 public:
  ExprParser(std::string_view text, Var var) : text_(text), var_(var) {}

  Expr run() {
    Expr e;
    e.var_ = var_;
    e.source_ = std::string(text_);
    out_ = &e;
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    e.root_ = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) +
                           "'",
                       pos_);
    }
    e.flatten();
    return e;
  }

 private:
  std::int32_t push(Expr::Node n) {
    out_->nodes_.push_back(n);
    return static_cast<std::int32_t>(out_->nodes_.size() - 1);
  }

  std::int32_t binary(NodeKind kind, std::int32_t l, std::int32_t r,
                      std::size_t at) {
    Expr::Node n;
    n.kind = kind;
    n.lhs = l;
    n.rhs = r;
    n.offset = at;
    return push(n);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  std::int32_t parse_expr() {
    std::int32_t lhs = parse_term();
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size()) return lhs;
      const char c = text_[pos_];
      if (c != '+' && c != '-') return lhs;
      const std::size_t at = pos_++;
      const std::int32_t rhs = parse_term();
      lhs = binary(c == '+' ? NodeKind::add : NodeKind::subtract, lhs, rhs, at);
    }
  }

  std::int32_t parse_term() {
    std::int32_t lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size()) return lhs;
      const char c = text_[pos_];
      if (c != '*' && c != '/') return lhs;
      const std::size_t at = pos_++;
      const std::int32_t rhs = parse_unary();
      lhs = binary(c == '*' ? NodeKind::multiply : NodeKind::divide, lhs, rhs,
                   at);
    }
  }

  std::int32_t parse_unary() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '-') {
      const std::size_t at = pos_++;
      const std::int32_t operand = parse_unary();
      Expr::Node n;
      n.kind = NodeKind::negate;
      n.lhs = operand;
      n.offset = at;
      return push(n);
    }
    return parse_power();
  }

  std::int32_t parse_power() {
    const std::int32_t base = parse_primary();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      const std::size_t at = pos_++;
      const std::int32_t exponent = parse_unary();
      return binary(NodeKind::power, base, exponent, at);
    }
    return base;
  }

  std::int32_t parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of expression", pos_);
    }
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      const std::int32_t inner = parse_expr();
      if (!peek(')')) throw ParseError("unbalanced '('", open);
      ++pos_;
      return inner;
    }
    if (c == ')') throw ParseError("unbalanced ')'", pos_);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (is_ident_start(c)) return parse_identifier();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  std::int32_t parse_number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) ||
            text_[end] == '.')) {
      ++end;
    }
    // An exponent marker only counts when digits follow; otherwise `e` is
    // left for the identifier lexer and produces a juxtaposition error.
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t probe = end + 1;
      if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) {
        ++probe;
      }
      if (probe < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[probe]))) {
        end = probe;
        while (end < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[end]))) {
          ++end;
        }
      }
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + end;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
      throw ParseError("malformed number", start);
    }
    pos_ = end;
    Expr::Node n;
    n.kind = NodeKind::number;
    n.number = value;
    n.offset = start;
    return push(n);
  }

  std::int32_t parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (peek('(')) {
      const FunctionInfo* info = find_function(name);
      if (info == nullptr) {
        throw ParseError("unknown function '" + std::string(name) + "'", start);
      }
      const std::size_t open = pos_++;
      std::array<std::int32_t, 2> args{-1, -1};
      int count = 0;
      if (peek(')')) {
        ++pos_;
      } else {
        for (;;) {
          const std::int32_t arg = parse_expr();
          if (count < 2) args[count] = arg;
          ++count;
          skip_ws();
          if (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (pos_ < text_.size() && text_[pos_] == ')') {
            ++pos_;
            break;
          }
          throw ParseError("unbalanced '('", open);
        }
      }
      if (count != info->arity) {
        throw ParseError("function '" + std::string(name) + "' expects " +
                             std::to_string(info->arity) + " argument(s), got " +
                             std::to_string(count),
                         start);
      }
      Expr::Node n;
      n.kind = NodeKind::call;
      n.fn = info->fn;
      n.lhs = args[0];
      n.rhs = args[1];
      n.offset = start;
      return push(n);
    }

    Expr::Node n;
    n.offset = start;
    if (name == "e") {
      n.kind = NodeKind::constant_e;
      return push(n);
    }
    if (name == "pi") {
      n.kind = NodeKind::constant_pi;
      return push(n);
    }
    if (name.size() == 1 && (name[0] == 'u' || name[0] == 'k' || name[0] == 'x')) {
      if (name[0] != var_name(var_)) {
        throw ParseError("variable '" + std::string(name) +
                             "' not allowed here (expected '" +
                             std::string(1, var_name(var_)) + "')",
                         start);
      }
      n.kind = NodeKind::variable;
      return push(n);
    }
    if (find_function(name) != nullptr) {
      throw ParseError("function '" + std::string(name) +
                           "' used without arguments",
                       start);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  Var var_;
  std::size_t pos_ = 0;
  Expr* out_ = nullptr;
};

Expr Expr::parse(std::string_view text, Var allowed_var) {
  return ExprParser(text, allowed_var).run();
}

namespace {

[[noreturn, gnu::cold, gnu::noinline]] void throw_non_finite(std::size_t offset) {
  throw DomainError(DomainErrorKind::non_finite,
                    "expression produced a non-finite value", offset);
}

// Applies an operator or call node to already evaluated operands.
double apply(const Expr::Node& n, double a, double b) {
  double r = 0.0;
  switch (n.kind) {
    case NodeKind::negate:
      return -a;
    case NodeKind::add:
      r = a + b;
      break;
    case NodeKind::subtract:
      r = a - b;
      break;
    case NodeKind::multiply:
      r = a * b;
      break;
    case NodeKind::divide:
      r = a / b;
      break;
    case NodeKind::power:
    case NodeKind::call:
      if (n.kind == NodeKind::power || n.fn == Function::pow) {
        if (a < 0.0) {
          const double rounded = std::round(b);
          if (std::fabs(b - rounded) > 1e-9) {
            throw DomainError(DomainErrorKind::negative_base_fractional_exponent,
                              "negative base raised to non-integral power",
                              n.offset);
          }
          r = std::pow(a, rounded);
        } else {
          r = std::pow(a, b);
        }
        break;
      }
      switch (n.fn) {
        case Function::sin:
          r = std::sin(a);
          break;
        case Function::cos:
          r = std::cos(a);
          break;
        case Function::exp:
          r = std::exp(a);
          break;
        case Function::log:
          if (!(a > 0.0)) {
            throw DomainError(DomainErrorKind::log_of_non_positive,
                              "log of non-positive argument", n.offset);
          }
          r = std::log(a);
          break;
        case Function::log1p:
          if (!(a > -1.0)) {
            throw DomainError(DomainErrorKind::log_of_non_positive,
                              "log1p argument not greater than -1", n.offset);
          }
          r = std::log1p(a);
          break;
        case Function::abs:
          r = std::fabs(a);
          break;
        case Function::floor:
          r = std::floor(a);
          break;
        case Function::pow:
          break;
      }
      break;
    default:  // leaves are pushed by the callers
      return a;
  }
  if (!std::isfinite(r)) [[unlikely]] throw_non_finite(n.offset);
  return r;
}

constexpr std::size_t kFlatStack = 32;
constexpr std::size_t kBlock = Expr::kBlock;

inline double checked(double r, std::size_t offset) {
  if (!std::isfinite(r)) [[unlikely]] throw_non_finite(offset);
  return r;
}

}  // namespace

struct Expr::Instr {
  enum class Op : std::uint8_t { push, var, neg, add, sub, mul, div, node };
  Op op = Op::push;
  double number = 0.0;
  std::int32_t node = -1;
};

bool Expr::has_variable(std::int32_t i) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  if (n.kind == NodeKind::variable) return true;
  return (n.lhs >= 0 && has_variable(n.lhs)) || (n.rhs >= 0 && has_variable(n.rhs));
}

void Expr::emit(std::vector<Instr>& out, std::int32_t i, std::size_t depth,
                std::size_t& need) const {
  using Op = Instr::Op;
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  need = std::max(need, depth + 1);
  if (!has_variable(i)) {
    // Variable-free subtrees fold to a number unless evaluating them fails,
    // in which case the failure is left for eval time.
    try {
      out.push_back({Op::push, eval_node(i, 0.0), i});
      return;
    } catch (const DomainError&) {
    }
  }
  if (n.kind == NodeKind::variable) {
    out.push_back({Op::var, 0.0, i});
    return;
  }
  if (n.lhs >= 0) emit(out, n.lhs, depth, need);
  if (n.rhs >= 0) emit(out, n.rhs, depth + 1, need);
  Op op = Op::node;
  switch (n.kind) {
    case NodeKind::negate: op = Op::neg; break;
    case NodeKind::add: op = Op::add; break;
    case NodeKind::subtract: op = Op::sub; break;
    case NodeKind::multiply: op = Op::mul; break;
    case NodeKind::divide: op = Op::div; break;
    default: break;
  }
  out.push_back({op, 0.0, i});
}

void Expr::flatten() {
  std::vector<Instr> out;
  std::size_t need = 0;
  if (tree_depth(root_) < 256) emit(out, root_, 0, need);
  flat_ok_ = need > 0 && need <= kFlatStack;
  program_ = std::make_shared<const std::vector<Instr>>(std::move(out));
}

std::size_t Expr::tree_depth(std::int32_t i) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  std::size_t d = 0;
  if (n.lhs >= 0) d = std::max(d, tree_depth(n.lhs));
  if (n.rhs >= 0) d = std::max(d, tree_depth(n.rhs));
  return d + 1;
}

double Expr::eval(double value) const {
  if (!flat_ok_) return eval_node(root_, value);
  using Op = Instr::Op;
  std::array<double, kFlatStack> st;
  std::size_t top = 0;
  for (const Instr& in : *program_) {
    switch (in.op) {
      case Op::push:
        st[top++] = in.number;
        break;
      case Op::var:
        st[top++] = value;
        break;
      case Op::neg:
        st[top - 1] = -st[top - 1];
        break;
      case Op::add:
        --top;
        st[top - 1] = checked(st[top - 1] + st[top], nodes_[in.node].offset);
        break;
      case Op::sub:
        --top;
        st[top - 1] = checked(st[top - 1] - st[top], nodes_[in.node].offset);
        break;
      case Op::mul:
        --top;
        st[top - 1] = checked(st[top - 1] * st[top], nodes_[in.node].offset);
        break;
      case Op::div:
        --top;
        st[top - 1] = checked(st[top - 1] / st[top], nodes_[in.node].offset);
        break;
      case Op::node: {
        const Node& n = nodes_[static_cast<std::size_t>(in.node)];
        if (n.rhs >= 0) {
          --top;
          st[top - 1] = apply(n, st[top - 1], st[top]);
        } else {
          st[top - 1] = apply(n, st[top - 1], 0.0);
        }
        break;
      }
    }
  }
  return st[0];
}

void Expr::eval_block(const double* x, double* out, std::size_t count) const {
  if (!flat_ok_ || count > kBlock) {
    for (std::size_t i = 0; i < count; ++i) out[i] = eval(x[i]);
    return;
  }
  using Op = Instr::Op;
  std::array<std::array<double, kBlock>, kFlatStack> st;
  std::size_t top = 0;
  try {
    for (const Instr& in : *program_) {
      switch (in.op) {
        case Op::push:
          st[top++].fill(in.number);
          continue;
        case Op::var:
          std::copy_n(x, count, st[top++].begin());
          continue;
        case Op::neg:
          for (std::size_t i = 0; i < count; ++i) st[top - 1][i] = -st[top - 1][i];
          continue;
        default:
          break;
      }
      const Node& n = nodes_[static_cast<std::size_t>(in.node)];
      const bool binary = n.rhs >= 0;
      if (binary) --top;
      double* a = st[top - 1].data();
      const double* b = binary ? st[top].data() : nullptr;
      bool finite = true;
      switch (in.op) {
        case Op::add:
          for (std::size_t i = 0; i < count; ++i) a[i] += b[i];
          break;
        case Op::sub:
          for (std::size_t i = 0; i < count; ++i) a[i] -= b[i];
          break;
        case Op::mul:
          for (std::size_t i = 0; i < count; ++i) a[i] *= b[i];
          break;
        case Op::div:
          for (std::size_t i = 0; i < count; ++i) a[i] /= b[i];
          break;
        default:
          if (n.kind == NodeKind::call && n.fn == Function::sin) {
            for (std::size_t i = 0; i < count; ++i) a[i] = std::sin(a[i]);
          } else if (n.kind == NodeKind::call && n.fn == Function::cos) {
            for (std::size_t i = 0; i < count; ++i) a[i] = std::cos(a[i]);
          } else {
            for (std::size_t i = 0; i < count; ++i) a[i] = apply(n, a[i], b ? b[i] : 0.0);
          }
      }
      for (std::size_t i = 0; i < count; ++i) finite &= std::isfinite(a[i]);
      if (!finite) throw_non_finite(n.offset);
    }
  } catch (const DomainError&) {
    // Replay one value at a time so the first failing index reports.
    for (std::size_t i = 0; i < count; ++i) out[i] = eval(x[i]);
    return;
  }
  std::copy_n(st[0].begin(), count, out);
}

double Expr::eval_node(std::int32_t i, double value) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  switch (n.kind) {
    case NodeKind::number:
      return n.number;
    case NodeKind::variable:
      return value;
    case NodeKind::constant_e:
      return std::numbers::e;
    case NodeKind::constant_pi:
      return std::numbers::pi;
    default: {
      const double a = eval_node(n.lhs, value);
      return apply(n, a, n.rhs >= 0 ? eval_node(n.rhs, value) : 0.0);
    }
  }
}

std::string Expr::to_string() const {
  std::string out;
  print_node(root_, out);
  return out;
}

void Expr::print_node(std::int32_t i, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  auto child = [&](std::int32_t c, bool parens) {
    if (parens) out += '(';
    print_node(c, out);
    if (parens) out += ')';
  };
  auto prec_of = [&](std::int32_t c) {
    return precedence(nodes_[static_cast<std::size_t>(c)].kind);
  };
  switch (n.kind) {
    case NodeKind::number: {
      std::array<char, 32> buf{};
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.number);
      out.append(buf.data(), res.ptr);
      return;
    }
    case NodeKind::variable:
      out += var_name(var_);
      return;
    case NodeKind::constant_e:
      out += 'e';
      return;
    case NodeKind::constant_pi:
      out += "pi";
      return;
    case NodeKind::negate:
      out += '-';
      child(n.lhs, prec_of(n.lhs) < precedence(NodeKind::negate));
      return;
    case NodeKind::call:
      out += function_name(n.fn);
      out += '(';
      print_node(n.lhs, out);
      if (function_arity(n.fn) == 2) {
        out += ", ";
        print_node(n.rhs, out);
      }
      out += ')';
      return;
    case NodeKind::power:
      // The base must be a primary; the exponent may be any unary form.
      child(n.lhs, prec_of(n.lhs) <= precedence(NodeKind::power));
      out += '^';
      child(n.rhs, prec_of(n.rhs) < precedence(NodeKind::negate));
      return;
    default: {
      const int p = precedence(n.kind);
      const char op = n.kind == NodeKind::add        ? '+'
                      : n.kind == NodeKind::subtract ? '-'
                      : n.kind == NodeKind::multiply ? '*'
                                                     : '/';
      child(n.lhs, prec_of(n.lhs) < p);
      out += ' ';
      out += op;
      out += ' ';
      child(n.rhs, prec_of(n.rhs) <= p);
      return;
    }
  }
}

bool Expr::same_tree(const Expr& other) const {
  return var_ == other.var_ && same_node(root_, other, other.root_);
}

bool Expr::same_node(std::int32_t a, const Expr& other, std::int32_t b) const {
  if (a < 0 || b < 0) return a == b;
  const Node& x = nodes_[static_cast<std::size_t>(a)];
  const Node& y = other.nodes_[static_cast<std::size_t>(b)];
  if (x.kind != y.kind) return false;
  if (x.kind == NodeKind::number) {
    return std::bit_cast<std::uint64_t>(x.number) ==
           std::bit_cast<std::uint64_t>(y.number);
  }
  if (x.kind == NodeKind::call && x.fn != y.fn) return false;
  return same_node(x.lhs, other, y.lhs) && same_node(x.rhs, other, y.rhs);
}

}  // namespace logtauber
