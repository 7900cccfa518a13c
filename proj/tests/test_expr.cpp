#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "anisogeo/expr.hpp"

using namespace anisogeo;

TEST_CASE("grammar basics") {
  Expr e = Expr::parse("y1^2 + y2^2", 2, 2, FiberKind::Vector);
  const ExprNode& r = e.root();
  CHECK(r.kind == NodeKind::Binary);
  CHECK(r.bop == BinaryOp::Add);
  CHECK(r.lhs->kind == NodeKind::Pow);
  CHECK(r.lhs->lhs->kind == NodeKind::Variable);
  CHECK(r.lhs->lhs->var == VarKind::Fiber);
  CHECK(r.lhs->lhs->index == 1);
  CHECK(r.lhs->value == 2.0);
}

TEST_CASE("structure of a composite expression") {
  Expr e = Expr::parse("exp(2*x1)*(y1^2+y2^2)", 2, 2, FiberKind::Vector);
  // Mul( Exp(Mul(2, x1)), Add(Pow(y1), Pow(y2)) ); Pow keeps its exponent
  // inline, so this tree has exactly 10 nodes
  CHECK(e.node_count() == 10);
  const ExprNode& r = e.root();
  CHECK(r.bop == BinaryOp::Mul);
  CHECK(r.lhs->uop == UnaryOp::Exp);
  CHECK(r.rhs->bop == BinaryOp::Add);
  CHECK(r.rhs->lhs->kind == NodeKind::Pow);
}

TEST_CASE("index range and kind errors carry offsets") {
  CHECK_THROWS_AS(Expr::parse("y3", 2, 2, FiberKind::Vector), ParseError);
  try {
    Expr::parse("y1 + y3", 2, 2, FiberKind::Vector);
    FAIL("expected ParseError");
  } catch (const ParseError& pe) {
    CHECK(pe.offset() == 5);
  }
  CHECK_THROWS_AS(Expr::parse("p1", 2, 2, FiberKind::Vector), ParseError);
  CHECK_THROWS_AS(Expr::parse("y1", 2, 2, FiberKind::Covector), ParseError);
  CHECK_THROWS_AS(Expr::parse("x3*y1", 2, 2, FiberKind::Vector), ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(x1)", 2, 2, FiberKind::Vector), ParseError);
  CHECK_THROWS_AS(Expr::parse("x1 +", 2, 2, FiberKind::Vector), ParseError);
  CHECK_THROWS_AS(Expr::parse("(x1", 2, 2, FiberKind::Vector), ParseError);
}

TEST_CASE("precedence and associativity") {
  Expr e = Expr::parse("1-2-3", 1, 1, FiberKind::Vector);
  std::vector<double> u{0.0, 0.0};
  CHECK(e.eval_value(u) == doctest::Approx(-4.0));
  CHECK(Expr::parse("2+3*4", 1, 1, FiberKind::Vector).eval_value(u) == doctest::Approx(14.0));
  CHECK(Expr::parse("2*3^2", 1, 1, FiberKind::Vector).eval_value(u) == doctest::Approx(18.0));
  CHECK(Expr::parse("-3^2", 1, 1, FiberKind::Vector).eval_value(u) == doctest::Approx(-9.0));
  CHECK(Expr::parse("8/4/2", 1, 1, FiberKind::Vector).eval_value(u) == doctest::Approx(1.0));
  CHECK(Expr::parse("2^-2", 1, 1, FiberKind::Vector).eval_value(u) == doctest::Approx(0.25));
}

TEST_CASE("evaluation matches closed forms") {
  Expr e = Expr::parse("sqrt(y1^2+y2^2)", 2, 2, FiberKind::Vector);
  std::vector<double> u{0.3, -0.2, 3.0, 4.0};
  CHECK(e.eval_value(u) == doctest::Approx(5.0));
  Expr f = Expr::parse("exp(x1)*sin(x2) + log(y1)/y2", 2, 2, FiberKind::Vector);
  double expect = std::exp(0.3) * std::sin(-0.2) + std::log(3.0) / 4.0;
  CHECK(f.eval_value(u) == doctest::Approx(expect));
}

TEST_CASE("domain errors name the offending subexpression") {
  std::vector<double> u{0.0, -1.0};
  Expr e = Expr::parse("sqrt(y1)", 1, 1, FiberKind::Vector);
  CHECK_THROWS_AS(e.eval_value(u), DomainError);
  try {
    Expr::parse("1/(y1+1)", 1, 1, FiberKind::Vector).eval_value(u);
    FAIL("expected DomainError");
  } catch (const DomainError& de) {
    CHECK(de.subexpression() == "1/(y1+1)");
  }
  CHECK_THROWS_AS(Expr::parse("log(y1)", 1, 1, FiberKind::Vector).eval_value(u),
                  DomainError);
}

namespace {

// random well-defined expression generator over strictly positive coordinates
Expr random_expr(std::mt19937& rng, int n, int m, int depth = 0) {
  std::uniform_int_distribution<int> pick(0, depth >= 4 ? 1 : 7);
  std::uniform_real_distribution<double> cval(0.2, 2.5);
  std::uniform_int_distribution<int> vidx(1, n);
  auto sub = [&](int d) { return random_expr(rng, n, m, d); };
  switch (pick(rng)) {
    case 0: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", cval(rng));
      return Expr::parse(buf, n, m, FiberKind::Vector);
    }
    case 1: {
      std::uniform_int_distribution<int> which(0, 1);
      std::string s = which(rng) ? "x" + std::to_string(vidx(rng))
                                 : "y" + std::to_string(std::uniform_int_distribution<int>(1, m)(rng));
      return Expr::parse(s, n, m, FiberKind::Vector);
    }
    case 2:
      return Expr::parse("(" + sub(depth + 1).str() + ")+(" + sub(depth + 1).str() + ")",
                         n, m, FiberKind::Vector);
    case 3:
      return Expr::parse("(" + sub(depth + 1).str() + ")*(" + sub(depth + 1).str() + ")",
                         n, m, FiberKind::Vector);
    case 4:
      return Expr::parse("sin(" + sub(depth + 1).str() + ")", n, m, FiberKind::Vector);
    case 5:
      return Expr::parse("cos(" + sub(depth + 1).str() + ")", n, m, FiberKind::Vector);
    case 6:
      return Expr::parse("exp((" + sub(depth + 1).str() + ")/4)", n, m, FiberKind::Vector);
    default:
      return Expr::parse("(" + sub(depth + 1).str() + ")^2", n, m, FiberKind::Vector);
  }
}

}  // namespace

TEST_CASE("canonical print round trip on random trees") {
  std::mt19937 rng(12345);
  for (int t = 0; t < 300; ++t) {
    Expr e = random_expr(rng, 2, 2);
    Expr r = Expr::parse(e.str(), 2, 2, FiberKind::Vector);
    CHECK(e.same_tree(r));
    CHECK(r.str() == e.str());
  }
}

TEST_CASE("whitespace tolerated, trailing junk rejected") {
  Expr a = Expr::parse("  x1 + 2 * y1 ", 1, 1, FiberKind::Vector);
  Expr b = Expr::parse("x1+2*y1", 1, 1, FiberKind::Vector);
  CHECK(a.same_tree(b));
  CHECK_THROWS_AS(Expr::parse("x1 x1", 1, 1, FiberKind::Vector), ParseError);
}
