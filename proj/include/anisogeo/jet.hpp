#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace anisogeo {

// Thrown by jet math functions on evaluation outside the domain
// (sqrt/log of a non-positive argument, division by zero, ...).
// expr::eval catches it and rethrows with the offending subexpression.
struct JetDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Multi-index bookkeeping for dense truncated Taylor expansions in `nvars`
// variables up to total degree `order`.  Multi-indices are stored grouped by
// degree; rank() maps a multi-index back to its storage position.  Layouts
// are cached process-wide and immutable.
class JetLayout {
public:
  static const JetLayout& get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(degree_of_.size()); }

  std::span<const std::uint8_t> exponents(int pos) const {
    return {exps_.data() + static_cast<std::size_t>(pos) * nvars_,
            static_cast<std::size_t>(nvars_)};
  }
  int degree(int pos) const { return degree_of_[pos]; }
  // first storage position of the given total degree
  int degree_begin(int d) const { return degree_begin_[d]; }
  int rank(std::span<const std::uint8_t> alpha) const;

  struct ProductTerm {
    std::int32_t i, j, k;  // alpha_i + alpha_j = alpha_k
  };
  std::span<const ProductTerm> product_plan() const { return plan_; }

  // position of alpha + e_var, or -1 if it exceeds the order
  int shift_up(int pos, int var) const {
    return shift_up_[static_cast<std::size_t>(pos) * nvars_ + var];
  }

private:
  JetLayout(int nvars, int order);
  int nvars_, order_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_of_;
  std::vector<int> degree_begin_;
  std::vector<std::uint64_t> keys_;  // packed exponents, sorted with position map
  std::vector<int> key_pos_;
  std::vector<ProductTerm> plan_;
  std::vector<int> shift_up_;
};

// Truncated multivariate Taylor expansion of a smooth function around an
// evaluation point: coefficient c_alpha = d^alpha f / alpha!.  All arithmetic
// truncates at min(order of the operands); nvars must agree.
class Jet {
public:
  Jet() : nvars_(0), order_(0), c_(1, 0.0) {}
  Jet(int nvars, int order, double value = 0.0);

  static Jet constant(int nvars, int order, double value) {
    return Jet(nvars, order, value);
  }
  // coordinate jet: value plus unit first-order coefficient in slot `var`
  static Jet variable(int nvars, int order, int var, double value);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  const JetLayout& layout() const { return JetLayout::get(nvars_, order_); }

  double value() const { return c_[0]; }
  double coeff(int pos) const { return c_[pos]; }
  double coeff(std::span<const std::uint8_t> alpha) const;
  // partial derivative d^alpha f = coeff(alpha) * alpha!
  double partial(std::span<const std::uint8_t> alpha) const;
  std::span<const double> coeffs() const { return c_; }

  Jet truncated(int order) const;
  // jet of the partial derivative with respect to variable `var`; order - 1
  Jet derivative(int var) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s) { c_[0] += s; return *this; }
  Jet& operator-=(double s) { c_[0] -= s; return *this; }
  Jet& operator*=(double s);
  Jet& operator/=(double s) { return (*this) *= (1.0 / s); }

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(const Jet& a, double s) { Jet r = a; r += s; return r; }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { Jet r = a; r -= s; return r; }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, double s) { Jet r = a; r *= s; return r; }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) { Jet r = a; r /= s; return r; }
  friend Jet operator/(double s, const Jet& a);

  // f(u) from the univariate series sum_j c[j] (u - u.value())^j
  static Jet compose(const Jet& u, std::span<const double> series);

  friend Jet sqrt(const Jet& u);
  friend Jet exp(const Jet& u);
  friend Jet log(const Jet& u);
  friend Jet sin(const Jet& u);
  friend Jet cos(const Jet& u);
  friend Jet pow(const Jet& u, double e);
  friend Jet inverse(const Jet& u);

private:
  int nvars_, order_;
  std::vector<double> c_;
};

}  // namespace anisogeo
