#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "anisogeo/jet.hpp"

namespace anisogeo {

enum class FiberKind { Vector, Covector };

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class DomainError : public std::runtime_error {
public:
  DomainError(const std::string& msg, const std::string& subexpr)
      : std::runtime_error(msg + " in subexpression '" + subexpr + "'"),
        subexpr_(subexpr) {}
  const std::string& subexpression() const { return subexpr_; }

private:
  std::string subexpr_;
};

enum class NodeKind { Constant, Variable, Unary, Binary, Pow };
enum class VarKind { Base, Fiber, Cofiber };  // x, y, p
enum class UnaryOp { Neg, Sqrt, Exp, Log, Sin, Cos };
enum class BinaryOp { Add, Sub, Mul, Div };

struct ExprNode {
  NodeKind kind;
  double value = 0.0;            // Constant payload / Pow exponent
  VarKind var = VarKind::Base;   // Variable payload
  int index = 0;                 // 1-based variable index
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::shared_ptr<const ExprNode> lhs, rhs;
  std::size_t offset = 0;        // source byte offset, for diagnostics
};

using ExprPtr = std::shared_ptr<const ExprNode>;

// Parsed arithmetic expression over chart coordinates x1..xn and y1..ym
// (vector fiber) or p1..pm (covector fiber).
class Expr {
public:
  Expr() = default;

  // Grammar:
  //   expr   := term (('+'|'-') term)*
  //   term   := factor (('*'|'/') factor)*
  //   factor := atom ('^' number)? | '-' factor
  //   atom   := number | ident | func '(' expr ')' | '(' expr ')'
  //   ident  := ('x'|'y'|'p') digit+ ;  func := sqrt|exp|log|sin|cos
  static Expr parse(std::string_view text, int n, int m, FiberKind kind);

  bool valid() const { return root_ != nullptr; }
  int base_dim() const { return n_; }
  int fiber_dim() const { return m_; }
  FiberKind fiber_kind() const { return kind_; }
  const ExprNode& root() const { return *root_; }

  // canonical printer; parse(str()) reproduces the same tree
  std::string str() const;

  std::size_t node_count() const;

  // evaluate over any scalar ring providing +,-,*,/ and sqrt/exp/log/sin/
  // cos/pow; coords holds the n+m chart coordinates, base block first
  template <class T>
  T eval(std::span<const T> coords) const;

  double eval_value(std::span<const double> coords) const;
  // jet of the expression at `u` carrying all partials up to `order` (<= 5)
  Jet eval_jet(std::span<const double> u, int order) const;

  bool same_tree(const Expr& other) const;

private:
  Expr(ExprPtr root, int n, int m, FiberKind kind)
      : root_(std::move(root)), n_(n), m_(m), kind_(kind) {}
  ExprPtr root_;
  int n_ = 0, m_ = 0;
  FiberKind kind_ = FiberKind::Vector;
};

std::string print_node(const ExprNode& node);

namespace detail {

inline double make_like(const double&, double v) { return v; }
inline Jet make_like(const Jet& proto, double v) {
  return Jet(proto.nvars(), proto.order(), v);
}

// double overloads enforce the same domain rules as the jet functions
double ad_sqrt(double a);
double ad_exp(double a);
double ad_log(double a);
double ad_sin(double a);
double ad_cos(double a);
double ad_div(double a, double b);
double ad_pow(double a, double e);

inline Jet ad_sqrt(const Jet& a) { return sqrt(a); }
inline Jet ad_exp(const Jet& a) { return exp(a); }
inline Jet ad_log(const Jet& a) { return log(a); }
inline Jet ad_sin(const Jet& a) { return sin(a); }
inline Jet ad_cos(const Jet& a) { return cos(a); }
inline Jet ad_div(const Jet& a, const Jet& b) { return a / b; }
inline Jet ad_pow(const Jet& a, double e) { return pow(a, e); }

template <class T>
T eval_node(const ExprNode& node, std::span<const T> coords, int n) {
  switch (node.kind) {
    case NodeKind::Constant:
      return make_like(coords[0], node.value);
    case NodeKind::Variable: {
      int slot = node.var == VarKind::Base ? node.index - 1 : n + node.index - 1;
      return coords[slot];
    }
    case NodeKind::Unary: {
      T a = eval_node(*node.lhs, coords, n);
      try {
        switch (node.uop) {
          case UnaryOp::Neg: return -a;
          case UnaryOp::Sqrt: return ad_sqrt(a);
          case UnaryOp::Exp: return ad_exp(a);
          case UnaryOp::Log: return ad_log(a);
          case UnaryOp::Sin: return ad_sin(a);
          case UnaryOp::Cos: return ad_cos(a);
        }
      } catch (const JetDomainError& e) {
        throw DomainError(e.what(), print_node(node));
      }
      break;
    }
    case NodeKind::Binary: {
      T a = eval_node(*node.lhs, coords, n);
      T b = eval_node(*node.rhs, coords, n);
      try {
        switch (node.bop) {
          case BinaryOp::Add: return a + b;
          case BinaryOp::Sub: return a - b;
          case BinaryOp::Mul: return a * b;
          case BinaryOp::Div: return ad_div(a, b);
        }
      } catch (const JetDomainError& e) {
        throw DomainError(e.what(), print_node(node));
      }
      break;
    }
    case NodeKind::Pow: {
      T a = eval_node(*node.lhs, coords, n);
      try {
        return ad_pow(a, node.value);
      } catch (const JetDomainError& e) {
        throw DomainError(e.what(), print_node(node));
      }
    }
  }
  throw std::logic_error("eval_node: corrupt expression tree");
}

}  // namespace detail

template <class T>
T Expr::eval(std::span<const T> coords) const {
  if (!root_) throw std::logic_error("Expr::eval on empty expression");
  return detail::eval_node(*root_, coords, n_);
}

// domain checks for plain-double evaluation, mirroring the jet rules
double checked_sqrt(double);
double checked_log(double);
double checked_div(double, double);
double checked_pow(double, double);

}  // namespace anisogeo
