#include "anisogeo/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace anisogeo {

namespace {

long long checked_ll(__int128 v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw CliffordError("rational overflow");
  return static_cast<long long>(v);
}

}  // namespace

Rational::Rational(long long n, long long d) : num_(n), den_(d) {
  if (den_ == 0) throw CliffordError("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational operator+(const Rational& a, const Rational& b) {
  __int128 n = static_cast<__int128>(a.num_) * b.den_ +
               static_cast<__int128>(b.num_) * a.den_;
  __int128 d = static_cast<__int128>(a.den_) * b.den_;
  // reduce in 128 bits before narrowing
  __int128 gg = n < 0 ? -n : n;
  __int128 dd = d;
  while (dd) {
    __int128 t = gg % dd;
    gg = dd;
    dd = t;
  }
  if (gg > 1) {
    n /= gg;
    d /= gg;
  }
  return Rational(checked_ll(n), checked_ll(d));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  Rational x(a.num_, b.den_);  // cross-reduce first
  Rational y(b.num_, a.den_);
  __int128 n = static_cast<__int128>(x.num_) * y.num_;
  __int128 d = static_cast<__int128>(x.den_) * y.den_;
  return Rational(checked_ll(n), checked_ll(d));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw CliffordError("rational division by zero");
  return a * Rational(b.den_, b.num_);
}

CliffordElement CliffordElement::scalar(Signature sig, Rational c) {
  CliffordElement e(sig);
  e.set(0, c);
  return e;
}

CliffordElement CliffordElement::generator(Signature sig, int i) {
  if (i < 0 || i >= sig.dim()) throw CliffordError("generator index out of range");
  CliffordElement e(sig);
  e.set(1u << i, Rational(1));
  return e;
}

CliffordElement CliffordElement::blade(Signature sig, std::uint32_t mask, Rational c) {
  if (mask >> sig.dim()) throw CliffordError("blade outside signature");
  CliffordElement e(sig);
  e.set(mask, c);
  return e;
}

Rational CliffordElement::coeff(std::uint32_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Rational() : it->second;
}

void CliffordElement::set(std::uint32_t mask, Rational c) {
  if (mask >> sig_.dim()) throw CliffordError("blade outside signature");
  if (c.is_zero())
    terms_.erase(mask);
  else
    terms_[mask] = c;
}

Parity CliffordElement::parity() const {
  bool even = false, odd = false;
  for (const auto& [m, c] : terms_) (std::popcount(m) % 2 ? odd : even) = true;
  if (even && odd) return Parity::Mixed;
  return odd ? Parity::Odd : Parity::Even;
}

bool CliffordElement::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

CliffordElement CliffordElement::operator-() const {
  CliffordElement r(sig_);
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

CliffordElement operator+(const CliffordElement& a, const CliffordElement& b) {
  if (!(a.sig_ == b.sig_)) throw CliffordError("signature mismatch");
  CliffordElement r = a;
  for (const auto& [m, c] : b.terms_) r.set(m, r.coeff(m) + c);
  return r;
}

CliffordElement operator-(const CliffordElement& a, const CliffordElement& b) {
  return a + (-b);
}

int blade_reorder_sign(std::uint32_t a, std::uint32_t b) {
  int swaps = 0;
  a >>= 1;
  while (a) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

std::pair<std::uint32_t, int> blade_product(const Signature& sig, std::uint32_t a,
                                            std::uint32_t b) {
  int sign = blade_reorder_sign(a, b);
  std::uint32_t common = a & b;
  while (common) {
    int i = std::countr_zero(common);
    sign *= sig.gen_square(i);
    common &= common - 1;
  }
  return {a ^ b, sign};
}

CliffordElement geometric_product(const CliffordElement& a, const CliffordElement& b) {
  if (!(a.signature() == b.signature())) throw CliffordError("signature mismatch");
  CliffordElement r(a.signature());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      auto [mask, sign] = blade_product(a.signature(), ma, mb);
      Rational add = ca * cb;
      if (sign < 0) add = -add;
      Rational cur = r.coeff(mask);
      r.set(mask, cur + add);
    }
  return r;
}

CliffordElement operator*(const CliffordElement& a, const CliffordElement& b) {
  return geometric_product(a, b);
}

CliffordElement CliffordElement::operator*(const Rational& s) const {
  CliffordElement r(sig_);
  if (s.is_zero()) return r;
  for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
  return r;
}

bool operator==(const CliffordElement& a, const CliffordElement& b) {
  return a.sig_ == b.sig_ && a.terms_ == b.terms_;
}

std::string CliffordElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.num();
    if (c.den() != 1) os << "/" << c.den();
    os << ")";
    std::uint32_t mm = m;
    while (mm) {
      int i = std::countr_zero(mm);
      os << " e" << (i + 1);
      mm &= mm - 1;
    }
  }
  return os.str();
}

Parity grading(const CliffordElement& a) { return a.parity(); }

CliffordElement reversal(const CliffordElement& a) {
  CliffordElement r(a.signature());
  for (const auto& [m, c] : a.terms()) {
    int k = std::popcount(m);
    bool flip = ((k * (k - 1)) / 2) % 2;
    r.set(m, flip ? -c : c);
  }
  return r;
}

CliffordElement grade_involution(const CliffordElement& a) {
  CliffordElement r(a.signature());
  for (const auto& [m, c] : a.terms()) r.set(m, (std::popcount(m) % 2) ? -c : c);
  return r;
}

CliffordElement spinor_norm(const CliffordElement& a) {
  return reversal(grade_involution(a)) * a;
}

std::optional<CliffordElement> clifford_inverse(const CliffordElement& u) {
  const Signature& sig = u.signature();
  if (u.is_zero()) return std::nullopt;
  if (u.terms().size() == 1) {
    // scaled blades invert in place: u = c b with b b = s, so
    // u^{-1} = b / (c s)
    auto [mask, c] = *u.terms().begin();
    int sign = blade_product(sig, mask, mask).second;
    CliffordElement b(sig);
    b.set(mask, Rational(1));
    return b * (Rational(1) / (c * Rational(sign)));
  }
  int d = sig.dim();
  if (d > 8)
    throw CliffordError("general inversion bounded to signatures of dimension <= 8");
  int N = 1 << d;
  // dense left-multiplication matrix over the blade basis, M x = e_0
  std::vector<Rational> M(static_cast<std::size_t>(N) * N);
  for (const auto& [ma, ca] : u.terms())
    for (int x = 0; x < N; ++x) {
      auto [mask, sign] = blade_product(sig, ma, static_cast<std::uint32_t>(x));
      Rational add = sign < 0 ? -ca : ca;
      M[static_cast<std::size_t>(mask) * N + x] += add;
    }
  std::vector<Rational> rhs(N);
  rhs[0] = Rational(1);
  // rational Gaussian elimination with largest-magnitude pivoting
  std::vector<int> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  for (int col = 0; col < N; ++col) {
    int piv = -1;
    double best = 0.0;
    for (int r = col; r < N; ++r) {
      double v = std::abs(M[static_cast<std::size_t>(r) * N + col].to_double());
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv < 0) return std::nullopt;  // singular
    if (piv != col) {
      for (int j = 0; j < N; ++j)
        std::swap(M[static_cast<std::size_t>(piv) * N + j],
                  M[static_cast<std::size_t>(col) * N + j]);
      std::swap(rhs[piv], rhs[col]);
    }
    Rational p = M[static_cast<std::size_t>(col) * N + col];
    for (int r = 0; r < N; ++r) {
      if (r == col) continue;
      Rational f = M[static_cast<std::size_t>(r) * N + col];
      if (f.is_zero()) continue;
      Rational ratio = f / p;
      for (int j = col; j < N; ++j)
        M[static_cast<std::size_t>(r) * N + j] =
            M[static_cast<std::size_t>(r) * N + j] -
            ratio * M[static_cast<std::size_t>(col) * N + j];
      rhs[r] = rhs[r] - ratio * rhs[col];
    }
  }
  CliffordElement inv(sig);
  for (int x = 0; x < N; ++x) {
    Rational v = rhs[x] / M[static_cast<std::size_t>(x) * N + x];
    if (!v.is_zero()) inv.set(static_cast<std::uint32_t>(x), v);
  }
  // verify
  CliffordElement check = u * inv;
  if (!(check == CliffordElement::scalar(sig, Rational(1)))) return std::nullopt;
  return inv;
}

GroupMembership twisted_group_membership(const CliffordElement& u, double tol) {
  (void)tol;  // the kernel is exact; tol kept for interface stability
  try {
    auto inv = clifford_inverse(u);
    if (!inv) return GroupMembership::NotMember;
    CliffordElement ubar = grade_involution(u);
    for (int i = 0; i < u.signature().dim(); ++i) {
      CliffordElement w =
          ubar * CliffordElement::generator(u.signature(), i) * (*inv);
      for (const auto& [m, c] : w.terms())
        if (std::popcount(m) != 1 && !c.is_zero()) return GroupMembership::NotMember;
    }
    return GroupMembership::Member;
  } catch (const CliffordError&) {
    return GroupMembership::Inconclusive;
  }
}

CliffordElement graded_tensor_product(const CliffordElement& a, const CliffordElement& b) {
  Signature sa = a.signature(), sb = b.signature();
  Signature sc{sa.p + sb.p, sa.q + sb.q};
  // order-preserving generator embeddings: negatives first per block, then
  // positives per block
  auto map_a = [&](int i) { return i < sa.p ? i : i + sb.p; };
  auto map_b = [&](int j) { return j < sb.p ? sa.p + j : sa.p + sa.q + j; };
  auto remap = [](std::uint32_t mask, auto&& f) {
    std::uint32_t r = 0;
    while (mask) {
      int i = std::countr_zero(mask);
      r |= 1u << f(i);
      mask &= mask - 1;
    }
    return r;
  };
  CliffordElement r(sc);
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      CliffordElement ea = CliffordElement::blade(sc, remap(ma, map_a), ca);
      CliffordElement eb = CliffordElement::blade(sc, remap(mb, map_b), cb);
      r = r + ea * eb;
    }
  return r;
}

std::string classify_small(const Signature& sig) {
  int d = sig.dim();
  if (d > 2) throw CliffordError("classify_small: p + q must be <= 2");
  if (d == 0) return "R";
  auto sq = [&](std::uint32_t m) { return blade_product(sig, m, m).second; };
  if (d == 1) {
    if (sq(1) == -1) return "C";  // e1^2 = -1: verified complex unit
    // split case: (1 +/- e1) / 2 are orthogonal idempotents
    CliffordElement e = CliffordElement::generator(sig, 0);
    CliffordElement one = CliffordElement::scalar(sig, Rational(1));
    CliffordElement p = (one + e) * Rational(1, 2);
    CliffordElement q = (one - e) * Rational(1, 2);
    if (p * p == p && q * q == q && (p * q).is_zero()) return "R+R";
    throw CliffordError("classify_small: inconsistent structure constants");
  }
  // d == 2: quaternions iff the three products i = e1, j = e2, k = e1 e2 all
  // square to -1 and multiply cyclically
  CliffordElement i = CliffordElement::generator(sig, 0);
  CliffordElement j = CliffordElement::generator(sig, 1);
  CliffordElement k = i * j;
  CliffordElement mone = CliffordElement::scalar(sig, Rational(-1));
  if (i * i == mone && j * j == mone && k * k == mone && i * j == k &&
      j * k == i && k * i == j && j * i == -k)
    return "H";
  // otherwise a blade squares to +1, providing a nontrivial idempotent: a
  // full 2x2 matrix algebra over the reals
  for (std::uint32_t m : {1u, 2u, 3u}) {
    if (sq(m) == 1) {
      CliffordElement b = CliffordElement::blade(sig, m, Rational(1));
      CliffordElement one = CliffordElement::scalar(sig, Rational(1));
      CliffordElement p = (one + b) * Rational(1, 2);
      if (p * p == p) return "M2(R)";
    }
  }
  throw CliffordError("classify_small: inconsistent structure constants");
}

// ---- Chevalley splitting ---------------------------------------------------

namespace {

// element of the graded tensor product of two block algebras: coefficients on
// pairs of blades, multiplied with the Koszul sign
struct TensorElement {
  Signature sa, sb;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Rational> terms;

  void add(std::uint32_t ma, std::uint32_t mb, Rational c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(ma, mb);
    auto it = terms.find(key);
    if (it == terms.end())
      terms.emplace(key, c);
    else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
};

TensorElement tensor_mul(const TensorElement& x, const TensorElement& y) {
  TensorElement r{x.sa, x.sb, {}};
  for (const auto& [kx, cx] : x.terms)
    for (const auto& [ky, cy] : y.terms) {
      auto [ma1, ma2] = kx;
      auto [mb1, mb2] = ky;
      // (a1 (x) a2)(b1 (x) b2) = (-1)^{|a2||b1|} a1 b1 (x) a2 b2
      int koszul = (std::popcount(ma2) * std::popcount(mb1)) % 2 ? -1 : 1;
      auto [mA, sA] = blade_product(x.sa, ma1, mb1);
      auto [mB, sB] = blade_product(x.sb, ma2, mb2);
      Rational c = cx * cy * Rational(koszul * sA * sB);
      r.add(mA, mB, c);
    }
  return r;
}

bool tensor_equal(const TensorElement& x, const TensorElement& y) {
  return x.terms == y.terms;
}

}  // namespace

ChevalleyReport chevalley_isomorphism_check(const Signature& sig_h,
                                            const Signature& sig_v, int trials,
                                            std::uint64_t seed) {
  Signature sc{sig_h.p + sig_v.p, sig_h.q + sig_v.q};
  if (sc.dim() > 12) throw CliffordError("combined dimension bound is 12");
  int dh = sig_h.dim(), dv = sig_v.dim();

  auto map_h = [&](int i) { return i < sig_h.p ? i : i + sig_v.p; };
  auto map_v = [&](int j) { return j < sig_v.p ? sig_h.p + j : sig_h.p + sig_h.q + j; };
  // inverse: combined generator index -> (block, within-block index)
  std::vector<std::pair<int, int>> from_combined(sc.dim());
  for (int i = 0; i < dh; ++i) from_combined[map_h(i)] = {0, i};
  for (int j = 0; j < dv; ++j) from_combined[map_v(j)] = {1, j};

  // zeta on a combined blade: ordered product of generator images in the
  // tensor algebra
  auto zeta_blade = [&](std::uint32_t mask) {
    TensorElement acc{sig_h, sig_v, {}};
    acc.add(0, 0, Rational(1));
    std::uint32_t mm = mask;
    while (mm) {
      int g = std::countr_zero(mm);
      mm &= mm - 1;
      auto [blk, idx] = from_combined[g];
      TensorElement img{sig_h, sig_v, {}};
      if (blk == 0)
        img.add(1u << idx, 0, Rational(1));
      else
        img.add(0, 1u << idx, Rational(1));
      acc = tensor_mul(acc, img);
    }
    return acc;
  };
  auto zeta = [&](const CliffordElement& u) {
    TensorElement acc{sig_h, sig_v, {}};
    for (const auto& [m, c] : u.terms()) {
      TensorElement b = zeta_blade(m);
      for (const auto& [k, bc] : b.terms) acc.add(k.first, k.second, bc * c);
    }
    return acc;
  };
  auto upsilon = [&](const TensorElement& t) {
    CliffordElement acc(sc);
    auto remap = [](std::uint32_t mask, auto&& f) {
      std::uint32_t r = 0;
      while (mask) {
        int i = std::countr_zero(mask);
        r |= 1u << f(i);
        mask &= mask - 1;
      }
      return r;
    };
    for (const auto& [k, c] : t.terms) {
      CliffordElement ea = CliffordElement::blade(sc, remap(k.first, map_h), c);
      CliffordElement eb = CliffordElement::blade(sc, remap(k.second, map_v), Rational(1));
      acc = acc + ea * eb;
    }
    return acc;
  };

  ChevalleyReport rep;
  rep.trials = trials;
  rep.generators_roundtrip = true;
  for (int g = 0; g < sc.dim(); ++g) {
    CliffordElement e = CliffordElement::generator(sc, g);
    if (!(upsilon(zeta(e)) == e)) rep.generators_roundtrip = false;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> mask_pick(0, (1 << sc.dim()) - 1);
  auto random_element = [&]() {
    CliffordElement e(sc);
    for (int t = 0; t < 4; ++t) {
      int c = coeff(rng);
      if (c == 0) c = 1;
      std::uint32_t m = static_cast<std::uint32_t>(mask_pick(rng));
      e.set(m, e.coeff(m) + Rational(c));
    }
    return e;
  };
  rep.multiplicative = true;
  for (int t = 0; t < trials; ++t) {
    CliffordElement u = random_element(), v = random_element();
    TensorElement lhs = zeta(u * v);
    TensorElement rhs = tensor_mul(zeta(u), zeta(v));
    if (!tensor_equal(lhs, rhs)) rep.multiplicative = false;
  }
  return rep;
}

}  // namespace anisogeo
