#include "anisogeo/jet.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <map>
#include <mutex>

namespace anisogeo {

namespace {

std::uint64_t pack_key(std::span<const std::uint8_t> alpha) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    k |= static_cast<std::uint64_t>(alpha[i] & 0x1f) << (5 * i);
  return k;
}

void enumerate_degree(int nvars, int deg, std::vector<std::uint8_t>& cur,
                      int var, int left, std::vector<std::uint8_t>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(left);
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(nvars, deg, cur, var + 1, left - e, out);
  }
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || nvars > 12 || order < 0 || order > 10)
    throw std::invalid_argument("JetLayout: unsupported nvars/order");
  std::vector<std::uint8_t> cur(nvars);
  degree_begin_.resize(order + 2, 0);
  for (int d = 0; d <= order; ++d) {
    degree_begin_[d] = static_cast<int>(exps_.size()) / nvars;
    enumerate_degree(nvars, d, cur, 0, d, exps_);
  }
  degree_begin_[order + 1] = static_cast<int>(exps_.size()) / nvars;
  int total = degree_begin_[order + 1];
  degree_of_.resize(total);
  for (int d = 0; d <= order; ++d)
    for (int p = degree_begin_[d]; p < degree_begin_[d + 1]; ++p)
      degree_of_[p] = d;

  keys_.resize(total);
  key_pos_.resize(total);
  std::vector<std::pair<std::uint64_t, int>> kp(total);
  for (int p = 0; p < total; ++p) kp[p] = {pack_key(exponents(p)), p};
  std::sort(kp.begin(), kp.end());
  for (int p = 0; p < total; ++p) {
    keys_[p] = kp[p].first;
    key_pos_[p] = kp[p].second;
  }

  std::vector<std::uint8_t> sum(nvars);
  for (int i = 0; i < total; ++i) {
    auto a = exponents(i);
    for (int j = 0; j < total; ++j) {
      if (degree_of_[i] + degree_of_[j] > order) continue;
      auto b = exponents(j);
      for (int v = 0; v < nvars; ++v) sum[v] = static_cast<std::uint8_t>(a[v] + b[v]);
      plan_.push_back({i, j, rank(sum)});
    }
  }

  shift_up_.assign(static_cast<std::size_t>(total) * nvars, -1);
  for (int p = 0; p < total; ++p) {
    if (degree_of_[p] == order) continue;
    auto a = exponents(p);
    for (int v = 0; v < nvars; ++v) {
      std::copy(a.begin(), a.end(), sum.begin());
      sum[v]++;
      shift_up_[static_cast<std::size_t>(p) * nvars + v] = rank(sum);
    }
  }
}

int JetLayout::rank(std::span<const std::uint8_t> alpha) const {
  std::uint64_t k = pack_key(alpha);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
  if (it == keys_.end() || *it != k)
    throw std::out_of_range("JetLayout::rank: multi-index outside layout");
  return key_pos_[it - keys_.begin()];
}

const JetLayout& JetLayout::get(int nvars, int order) {
  // lock-free fast path; layouts are immutable and live forever
  static std::atomic<const JetLayout*> cache[13][11] = {};
  if (nvars < 1 || nvars > 12 || order < 0 || order > 10)
    throw std::invalid_argument("JetLayout: unsupported nvars/order");
  std::atomic<const JetLayout*>& slot = cache[nvars][order];
  const JetLayout* p = slot.load(std::memory_order_acquire);
  if (p) return *p;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  p = slot.load(std::memory_order_acquire);
  if (!p) {
    p = new JetLayout(nvars, order);
    slot.store(p, std::memory_order_release);
  }
  return *p;
}

Jet::Jet(int nvars, int order, double value) : nvars_(nvars), order_(order) {
  c_.assign(JetLayout::get(nvars, order).size(), 0.0);
  c_[0] = value;
}

Jet Jet::variable(int nvars, int order, int var, double value) {
  Jet j(nvars, order, value);
  if (order >= 1) j.c_[j.layout().degree_begin(1) + var] = 1.0;
  return j;
}

double Jet::coeff(std::span<const std::uint8_t> alpha) const {
  return c_[layout().rank(alpha)];
}

double Jet::partial(std::span<const std::uint8_t> alpha) const {
  double f = 1.0;
  for (auto e : alpha)
    for (int k = 2; k <= e; ++k) f *= k;
  return coeff(alpha) * f;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet r(nvars_, order);
  std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
  return r;
}

Jet Jet::derivative(int var) const {
  if (order_ < 1) throw std::logic_error("Jet::derivative: order 0 jet");
  const JetLayout& lo = layout();
  Jet r(nvars_, order_ - 1);
  const JetLayout& lr = r.layout();
  for (int p = 0; p < lr.size(); ++p) {
    int up = lo.shift_up(p, var);  // layouts share position order per degree
    auto a = lr.exponents(p);
    r.c_[p] = c_[up] * (a[var] + 1);
  }
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

namespace {
inline void check_vars(const Jet& a, const Jet& b) {
  if (a.nvars() != b.nvars())
    throw std::logic_error("Jet arithmetic: nvars mismatch");
}
}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  check_vars(*this, o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_vars(*this, o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a.order() <= b.order() ? a : a.truncated(b.order());
  r += b;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a.order() <= b.order() ? a : a.truncated(b.order());
  r -= b;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_vars(a, b);
  int order = std::min(a.order(), b.order());
  Jet r(a.nvars(), order);
  // positions of degree <= order coincide across layouts of higher order,
  // so operands of mixed order can be read through the min-order plan
  for (const auto& t : r.layout().product_plan())
    r.c_[t.k] += a.c_[t.i] * b.c_[t.j];
  return r;
}

Jet Jet::compose(const Jet& u, std::span<const double> series) {
  // Horner evaluation in the ideal (u - u0); delta has zero constant term.
  Jet delta = u;
  delta.c_[0] = 0.0;
  Jet r(u.nvars_, u.order_, series.back());
  for (int j = static_cast<int>(series.size()) - 2; j >= 0; --j) {
    r = r * delta;
    r.c_[0] += series[j];
  }
  return r;
}

Jet inverse(const Jet& u) {
  double u0 = u.value();
  if (u0 == 0.0) throw JetDomainError("division by zero");
  std::vector<double> s(u.order() + 1);
  double p = 1.0 / u0;
  for (int j = 0; j <= u.order(); ++j) {
    s[j] = p;  // (-1)^j / u0^{j+1}
    p *= -1.0 / u0;
  }
  return Jet::compose(u, s);
}

Jet operator/(const Jet& a, const Jet& b) {
  check_vars(a, b);
  return a * inverse(b.truncated(std::min(a.order(), b.order())));
}

Jet operator/(double s, const Jet& a) { return inverse(a) * s; }

Jet sqrt(const Jet& u) {
  double u0 = u.value();
  if (u0 < 0.0) throw JetDomainError("sqrt of negative argument");
  if (u0 == 0.0) {
    if (u.order() >= 1) throw JetDomainError("sqrt at zero is not differentiable");
    return Jet(u.nvars(), 0, 0.0);
  }
  std::vector<double> s(u.order() + 1);
  double r0 = std::sqrt(u0);
  s[0] = r0;
  for (int j = 1; j <= u.order(); ++j)
    s[j] = s[j - 1] * (0.5 - (j - 1)) / (j * u0);
  return Jet::compose(u, s);
}

Jet exp(const Jet& u) {
  std::vector<double> s(u.order() + 1);
  double e0 = std::exp(u.value());
  double fact = 1.0;
  for (int j = 0; j <= u.order(); ++j) {
    if (j > 0) fact *= j;
    s[j] = e0 / fact;
  }
  return Jet::compose(u, s);
}

Jet log(const Jet& u) {
  double u0 = u.value();
  if (u0 <= 0.0) throw JetDomainError("log of non-positive argument");
  std::vector<double> s(u.order() + 1);
  s[0] = std::log(u0);
  double p = 1.0 / u0;
  for (int j = 1; j <= u.order(); ++j) {
    s[j] = p / j;  // (-1)^{j-1} / (j u0^j)
    p *= -1.0 / u0;
  }
  return Jet::compose(u, s);
}

Jet sin(const Jet& u) {
  double u0 = u.value();
  double sv = std::sin(u0), cv = std::cos(u0);
  std::vector<double> s(u.order() + 1);
  double fact = 1.0;
  for (int j = 0; j <= u.order(); ++j) {
    if (j > 0) fact *= j;
    double d;
    switch (j % 4) {
      case 0: d = sv; break;
      case 1: d = cv; break;
      case 2: d = -sv; break;
      default: d = -cv; break;
    }
    s[j] = d / fact;
  }
  return Jet::compose(u, s);
}

Jet cos(const Jet& u) {
  double u0 = u.value();
  double sv = std::sin(u0), cv = std::cos(u0);
  std::vector<double> s(u.order() + 1);
  double fact = 1.0;
  for (int j = 0; j <= u.order(); ++j) {
    if (j > 0) fact *= j;
    double d;
    switch (j % 4) {
      case 0: d = cv; break;
      case 1: d = -sv; break;
      case 2: d = -cv; break;
      default: d = sv; break;
    }
    s[j] = d / fact;
  }
  return Jet::compose(u, s);
}

Jet pow(const Jet& u, double e) {
  double ip;
  if (std::modf(e, &ip) == 0.0 && std::abs(ip) <= 64) {
    // integer exponents work at any base point (negative ones need u != 0)
    long n = static_cast<long>(ip);
    if (n == 0) return Jet(u.nvars(), u.order(), 1.0);
    Jet base = n > 0 ? u : inverse(u);
    unsigned long k = static_cast<unsigned long>(n > 0 ? n : -n);
    Jet acc(u.nvars(), u.order(), 1.0);
    while (k) {
      if (k & 1) acc = acc * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return acc;
  }
  double u0 = u.value();
  if (u0 <= 0.0)
    throw JetDomainError("pow with non-integer exponent needs positive base");
  std::vector<double> s(u.order() + 1);
  s[0] = std::pow(u0, e);
  for (int j = 1; j <= u.order(); ++j)
    s[j] = s[j - 1] * (e - (j - 1)) / (j * u0);
  return Jet::compose(u, s);
}

}  // namespace anisogeo
