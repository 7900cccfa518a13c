#include "anisogeo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>

namespace anisogeo {

namespace detail {

double ad_sqrt(double a) {
  if (a < 0.0) throw JetDomainError("sqrt of negative argument");
  return std::sqrt(a);
}
double ad_exp(double a) { return std::exp(a); }
double ad_log(double a) {
  if (a <= 0.0) throw JetDomainError("log of non-positive argument");
  return std::log(a);
}
double ad_sin(double a) { return std::sin(a); }
double ad_cos(double a) { return std::cos(a); }
double ad_div(double a, double b) {
  if (b == 0.0) throw JetDomainError("division by zero");
  return a / b;
}
double ad_pow(double a, double e) {
  double ip;
  if (std::modf(e, &ip) == 0.0) {
    if (a == 0.0 && e < 0.0) throw JetDomainError("division by zero");
    return std::pow(a, e);
  }
  if (a <= 0.0)
    throw JetDomainError("pow with non-integer exponent needs positive base");
  return std::pow(a, e);
}

}  // namespace detail

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;
  int n, m;
  FiberKind kind;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos);
  }

  ExprPtr make(ExprNode node) { return std::make_shared<ExprNode>(std::move(node)); }

  double number() {
    skip_ws();
    std::size_t start = pos;
    double v;
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc() || p == text.data() + pos)
      throw ParseError("expected number", start);
    pos = p - text.data();
    return v;
  }

  double signed_number() {
    skip_ws();
    bool neg = accept('-');
    double v = number();
    return neg ? -v : v;
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      std::size_t at = pos;
      if (accept('+'))
        lhs = make({NodeKind::Binary, 0, {}, 0, {}, BinaryOp::Add, lhs, parse_term(), at});
      else if (accept('-'))
        lhs = make({NodeKind::Binary, 0, {}, 0, {}, BinaryOp::Sub, lhs, parse_term(), at});
      else
        return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      std::size_t at = pos;
      if (accept('*'))
        lhs = make({NodeKind::Binary, 0, {}, 0, {}, BinaryOp::Mul, lhs, parse_factor(), at});
      else if (accept('/'))
        lhs = make({NodeKind::Binary, 0, {}, 0, {}, BinaryOp::Div, lhs, parse_factor(), at});
      else
        return lhs;
    }
  }

  ExprPtr parse_factor() {
    std::size_t at = pos;
    if (accept('-')) {
      ExprPtr inner = parse_factor();
      return make({NodeKind::Unary, 0, {}, 0, UnaryOp::Neg, {}, inner, nullptr, at});
    }
    ExprPtr a = parse_atom();
    skip_ws();
    if (accept('^')) {
      double e = signed_number();
      return make({NodeKind::Pow, e, {}, 0, {}, {}, a, nullptr, at});
    }
    return a;
  }

  ExprPtr parse_atom() {
    skip_ws();
    std::size_t at = pos;
    if (pos >= text.size()) throw ParseError("unexpected end of input", pos);
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = number();
      return make({NodeKind::Constant, v, {}, 0, {}, {}, nullptr, nullptr, at});
    }
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
        ++pos;
      std::string_view word = text.substr(start, pos - start);
      if (word.size() == 1 && (word[0] == 'x' || word[0] == 'y' || word[0] == 'p')) {
        std::size_t digit_start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
          ++pos;
        if (pos == digit_start)
          throw ParseError("variable needs an index", digit_start);
        int idx = 0;
        std::from_chars(text.data() + digit_start, text.data() + pos, idx);
        VarKind vk;
        int lim;
        if (word[0] == 'x') {
          vk = VarKind::Base;
          lim = n;
        } else if (word[0] == 'y') {
          if (kind != FiberKind::Vector)
            throw ParseError("'y' variables require a vector fiber", start);
          vk = VarKind::Fiber;
          lim = m;
        } else {
          if (kind != FiberKind::Covector)
            throw ParseError("'p' variables require a covector fiber", start);
          vk = VarKind::Cofiber;
          lim = m;
        }
        if (idx < 1 || idx > lim)
          throw ParseError("variable index out of range", start);
        return make({NodeKind::Variable, 0, vk, idx, {}, {}, nullptr, nullptr, at});
      }
      UnaryOp op;
      if (word == "sqrt") op = UnaryOp::Sqrt;
      else if (word == "exp") op = UnaryOp::Exp;
      else if (word == "log") op = UnaryOp::Log;
      else if (word == "sin") op = UnaryOp::Sin;
      else if (word == "cos") op = UnaryOp::Cos;
      else throw ParseError("unknown identifier '" + std::string(word) + "'", start);
      expect('(');
      ExprPtr arg = parse_expr();
      expect(')');
      return make({NodeKind::Unary, 0, {}, 0, op, {}, arg, nullptr, at});
    }
    throw ParseError("unexpected character", pos);
  }
};

std::string format_number(double v) {
  // shortest representation that round-trips exactly
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// precedence levels: 1 add/sub, 2 mul/div, 3 pow/neg, 4 atom
int node_level(const ExprNode& e) {
  switch (e.kind) {
    case NodeKind::Binary:
      return (e.bop == BinaryOp::Add || e.bop == BinaryOp::Sub) ? 1 : 2;
    case NodeKind::Pow:
      return 3;
    case NodeKind::Unary:
      return e.uop == UnaryOp::Neg ? 3 : 4;
    case NodeKind::Constant:
      // negative constants print with a leading '-', bind like a negation
      return e.value < 0 ? 3 : 4;
    default:
      return 4;
  }
}

void print_rec(const ExprNode& e, std::string& out, int min_level) {
  bool paren = node_level(e) < min_level;
  if (paren) out += '(';
  switch (e.kind) {
    case NodeKind::Constant:
      out += format_number(e.value);
      break;
    case NodeKind::Variable:
      out += e.var == VarKind::Base ? 'x' : (e.var == VarKind::Fiber ? 'y' : 'p');
      out += std::to_string(e.index);
      break;
    case NodeKind::Binary: {
      int lv = node_level(e);
      print_rec(*e.lhs, out, lv);
      switch (e.bop) {
        case BinaryOp::Add: out += '+'; break;
        case BinaryOp::Sub: out += '-'; break;
        case BinaryOp::Mul: out += '*'; break;
        case BinaryOp::Div: out += '/'; break;
      }
      // left associativity: the right operand must bind strictly tighter
      print_rec(*e.rhs, out, lv + 1);
      break;
    }
    case NodeKind::Pow:
      print_rec(*e.lhs, out, 4);
      out += '^';
      out += format_number(e.value);
      break;
    case NodeKind::Unary:
      if (e.uop == UnaryOp::Neg) {
        out += '-';
        print_rec(*e.lhs, out, 3);
      } else {
        switch (e.uop) {
          case UnaryOp::Sqrt: out += "sqrt"; break;
          case UnaryOp::Exp: out += "exp"; break;
          case UnaryOp::Log: out += "log"; break;
          case UnaryOp::Sin: out += "sin"; break;
          case UnaryOp::Cos: out += "cos"; break;
          default: break;
        }
        out += '(';
        print_rec(*e.lhs, out, 1);
        out += ')';
      }
      break;
  }
  if (paren) out += ')';
}

std::size_t count_nodes(const ExprNode& e) {
  std::size_t c = 1;
  if (e.lhs) c += count_nodes(*e.lhs);
  if (e.rhs) c += count_nodes(*e.rhs);
  return c;
}

bool trees_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant: return a.value == b.value;
    case NodeKind::Variable: return a.var == b.var && a.index == b.index;
    case NodeKind::Unary:
      return a.uop == b.uop && trees_equal(*a.lhs, *b.lhs);
    case NodeKind::Binary:
      return a.bop == b.bop && trees_equal(*a.lhs, *b.lhs) && trees_equal(*a.rhs, *b.rhs);
    case NodeKind::Pow:
      return a.value == b.value && trees_equal(*a.lhs, *b.lhs);
  }
  return false;
}

}  // namespace

Expr Expr::parse(std::string_view text, int n, int m, FiberKind kind) {
  if (n < 1 || m < 1) throw std::invalid_argument("Expr::parse: dims must be >= 1");
  Parser p{text, 0, n, m, kind};
  ExprPtr root = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size())
    throw ParseError("trailing input after expression", p.pos);
  return Expr(std::move(root), n, m, kind);
}

std::string Expr::str() const {
  if (!root_) return {};
  std::string out;
  print_rec(*root_, out, 1);
  return out;
}

std::string print_node(const ExprNode& node) {
  std::string out;
  print_rec(node, out, 1);
  return out;
}

std::size_t Expr::node_count() const { return root_ ? count_nodes(*root_) : 0; }

bool Expr::same_tree(const Expr& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return trees_equal(*root_, *other.root_);
}

double Expr::eval_value(std::span<const double> coords) const {
  return eval<double>(coords);
}

Jet Expr::eval_jet(std::span<const double> u, int order) const {
  if (order < 0 || order > 5)
    throw std::invalid_argument("eval_jet: order must be in [0, 5]");
  int d = n_ + m_;
  if (static_cast<int>(u.size()) != d)
    throw std::invalid_argument("eval_jet: wrong number of coordinates");
  std::vector<Jet> coords;
  coords.reserve(d);
  for (int i = 0; i < d; ++i) coords.push_back(Jet::variable(d, order, i, u[i]));
  return eval<Jet>(coords);
}

}  // namespace anisogeo
