#include <cmath>
#include <numbers>

#include "doctest.h"
#include "expr_corpus.hpp"
#include "logtauber/errors.hpp"
#include "logtauber/expr.hpp"

using logtauber::DomainError;
using logtauber::DomainErrorKind;
using logtauber::Expr;
using logtauber::NodeKind;
using logtauber::ParseError;
using logtauber::Var;

namespace {

std::size_t parse_error_offset(const char* text, Var var) {
  try {
    (void)Expr::parse(text, var);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected a parse error for " << text);
  return 0;
}

DomainError eval_error(const char* text, Var var, double at) {
  const Expr e = Expr::parse(text, var);
  try {
    (void)e.eval(at);
  } catch (const DomainError& err) {
    return err;
  }
  FAIL("expected a domain error for " << text);
  return DomainError(DomainErrorKind::outside_domain, "");
}

}  // namespace

TEST_CASE("corpus fixtures evaluate to their oracle values") {
  for (const auto& f : corpus::grammar_fixtures()) {
    CAPTURE(f.text);
    const Expr e = Expr::parse(f.text, f.var);
    const double want = f.oracle(f.at);
    CHECK(e.eval(f.at) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("corpus fixtures round-trip through to_string") {
  const auto fixtures = corpus::grammar_fixtures();
  REQUIRE(fixtures.size() == 30);
  for (const auto& f : fixtures) {
    CAPTURE(f.text);
    const Expr first = Expr::parse(f.text, f.var);
    const std::string printed = first.to_string();
    const Expr second = Expr::parse(printed, f.var);
    CHECK(first.same_tree(second));
    CHECK(second.to_string() == printed);
  }
}

TEST_CASE("literal and alternating-sign trees") {
  const Expr three = Expr::parse("3", Var::u);
  REQUIRE(three.nodes().size() == 1);
  CHECK(three.nodes()[0].kind == NodeKind::number);
  CHECK(three.eval(123.0) == 3.0);

  const Expr alt = Expr::parse("(-1)^k * k", Var::k);
  const auto& root = alt.nodes()[alt.root()];
  CHECK(root.kind == NodeKind::multiply);
  const auto& pow = alt.nodes()[root.lhs];
  CHECK(pow.kind == NodeKind::power);
  CHECK(alt.nodes()[pow.lhs].kind == NodeKind::negate);
  CHECK(alt.nodes()[pow.rhs].kind == NodeKind::variable);
  CHECK(alt.nodes()[root.rhs].kind == NodeKind::variable);
  CHECK(alt.eval(3.0) == -3.0);
  CHECK(alt.eval(4.0) == 4.0);
}

TEST_CASE("nested calls") {
  const Expr e = Expr::parse("sin(log(log(u)))", Var::u);
  CHECK(e.eval(std::exp(std::numbers::e)) == doctest::Approx(0.841470984).epsilon(1e-9));
}

TEST_CASE("same_tree ignores whitespace and offsets but not structure") {
  CHECK(Expr::parse("u+1", Var::u).same_tree(Expr::parse("  u +  1 ", Var::u)));
  CHECK_FALSE(Expr::parse("u+1", Var::u).same_tree(Expr::parse("1+u", Var::u)));
  CHECK_FALSE(Expr::parse("2^3^2", Var::u).same_tree(Expr::parse("(2^3)^2", Var::u)));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK(parse_error_offset("foo(u)", Var::u) == 0);
  CHECK(parse_error_offset("2*bar", Var::u) == 2);
  CHECK(parse_error_offset("sin(u", Var::u) == 3);
  CHECK(parse_error_offset("(u+1", Var::u) == 0);
  CHECK(parse_error_offset("u+1)", Var::u) == 3);
  CHECK(parse_error_offset("k+u", Var::k) == 2);
  CHECK(parse_error_offset("1 + k", Var::u) == 4);
  CHECK(parse_error_offset("pow(u)", Var::u) == 0);
  CHECK(parse_error_offset("u + sin(u, u)", Var::u) == 4);
  CHECK(parse_error_offset("", Var::u) == 0);
  CHECK(parse_error_offset("u +", Var::u) == 3);
  CHECK(parse_error_offset("1..2", Var::u) == 0);
  CHECK(parse_error_offset("u $ 2", Var::u) == 2);
  CHECK(parse_error_offset("log + 1", Var::u) == 0);
}

TEST_CASE("log of a non-positive argument points at the call") {
  const DomainError e = eval_error("1 + log(u - 3)", Var::u, 2.0);
  CHECK(e.kind() == DomainErrorKind::log_of_non_positive);
  CHECK(e.offset() == 4);
}

TEST_CASE("negative base with a fractional exponent points at the operator") {
  const DomainError e = eval_error("(-1)^k * k", Var::k, 2.5);
  CHECK(e.kind() == DomainErrorKind::negative_base_fractional_exponent);
  CHECK(e.offset() == 4);
  const DomainError f = eval_error("pow(u - 5, 0.5)", Var::u, 1.0);
  CHECK(f.kind() == DomainErrorKind::negative_base_fractional_exponent);
  CHECK(f.offset() == 0);
}

TEST_CASE("non-finite intermediates point at the producing node") {
  const DomainError e = eval_error("2 + 1/(u - 1)", Var::u, 1.0);
  CHECK(e.kind() == DomainErrorKind::non_finite);
  CHECK(e.offset() == 5);
  const DomainError g = eval_error("exp(u)", Var::u, 1000.0);
  CHECK(g.kind() == DomainErrorKind::non_finite);
  CHECK(g.offset() == 0);
}

TEST_CASE("integer exponents of negative bases are allowed") {
  CHECK(Expr::parse("(-2)^3", Var::u).eval(0.0) == -8.0);
  CHECK(Expr::parse("(-1)^k", Var::k).eval(7.0) == -1.0);
}

TEST_CASE("block evaluation matches one value at a time") {
  for (const auto& f : corpus::grammar_fixtures()) {
    CAPTURE(f.text);
    const Expr e = Expr::parse(f.text, f.var);
    double x[Expr::kBlock], got[Expr::kBlock];
    for (std::size_t i = 0; i < Expr::kBlock; ++i) x[i] = f.at + static_cast<double>(i);
    bool scalar_ok = true;
    double want[Expr::kBlock];
    try {
      for (std::size_t i = 0; i < Expr::kBlock; ++i) want[i] = e.eval(x[i]);
    } catch (const DomainError&) {
      scalar_ok = false;
    }
    if (!scalar_ok) {
      CHECK_THROWS_AS(e.eval_block(x, got, Expr::kBlock), DomainError);
      continue;
    }
    e.eval_block(x, got, Expr::kBlock);
    for (std::size_t i = 0; i < Expr::kBlock; ++i) CHECK(got[i] == want[i]);
  }
}

TEST_CASE("block evaluation reports the first failing value") {
  // Index 2 fails in the log, index 4 earlier in the tree at the division.
  const Expr e = Expr::parse("1/(u - 5) + log(u - 3)", Var::u);
  const double x[] = {10.0, 9.0, 2.0, 8.0, 5.0};
  double out[5];
  try {
    e.eval_block(x, out, 5);
    FAIL("expected a domain error");
  } catch (const DomainError& err) {
    CHECK(err.kind() == DomainErrorKind::log_of_non_positive);
    CHECK(err.offset() == 12);
  }
  const double y[] = {10.0, 5.0};
  try {
    e.eval_block(y, out, 2);
    FAIL("expected a domain error");
  } catch (const DomainError& err) {
    CHECK(err.kind() == DomainErrorKind::non_finite);
    CHECK(err.offset() == 1);
  }
}

TEST_CASE("constant subtrees that fail are left for evaluation") {
  const Expr e = Expr::parse("u + log(0 - 1)", Var::u);
  const DomainError err = eval_error("u + log(0 - 1)", Var::u, 1.0);
  CHECK(err.kind() == DomainErrorKind::log_of_non_positive);
  CHECK(err.offset() == 4);
  CHECK(Expr::parse("2^10 * u", Var::u).eval(0.5) == 512.0);
}
