#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anisogeo {

// Exact rational with 64-bit numerator/denominator, normalized, gcd-reduced.
// Intermediate products run through 128-bit arithmetic; overflow throws.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(long long n, long long d);

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / den_; }

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
  Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
  Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

private:
  long long num_, den_;
};

struct CliffordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Diagonal quadratic-form signature: the first p generators square to -1,
// the following q square to +1.
struct Signature {
  int p = 0, q = 0;
  int dim() const { return p + q; }
  // square of generator i (0-based)
  int gen_square(int i) const { return i < p ? -1 : 1; }
  friend bool operator==(const Signature& a, const Signature& b) {
    return a.p == b.p && a.q == b.q;
  }
};

enum class Parity { Even, Odd, Mixed };

// Multivector over a fixed signature: map from basis blades (bit masks over
// the generators, ascending canonical order) to rational coefficients.
class CliffordElement {
public:
  CliffordElement() = default;
  explicit CliffordElement(Signature sig) : sig_(sig) { check_dim(); }
  static CliffordElement scalar(Signature sig, Rational c);
  static CliffordElement generator(Signature sig, int i);  // 0-based
  static CliffordElement blade(Signature sig, std::uint32_t mask, Rational c);

  const Signature& signature() const { return sig_; }
  const std::map<std::uint32_t, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coeff(std::uint32_t mask) const;
  void set(std::uint32_t mask, Rational c);

  Parity parity() const;
  bool is_scalar() const;

  CliffordElement operator-() const;
  friend CliffordElement operator+(const CliffordElement& a, const CliffordElement& b);
  friend CliffordElement operator-(const CliffordElement& a, const CliffordElement& b);
  friend CliffordElement operator*(const CliffordElement& a, const CliffordElement& b);
  CliffordElement operator*(const Rational& s) const;
  friend bool operator==(const CliffordElement& a, const CliffordElement& b);

  std::string str() const;

private:
  void check_dim() const {
    if (sig_.dim() > 12) throw CliffordError("signature dimension bound is 12");
  }
  Signature sig_;
  std::map<std::uint32_t, Rational> terms_;
};

// sign from reordering e_A e_B into canonical ascending order
int blade_reorder_sign(std::uint32_t a, std::uint32_t b);

// product of basis blades: result mask is a XOR b, with reordering and
// generator-square signs
std::pair<std::uint32_t, int> blade_product(const Signature& sig, std::uint32_t a,
                                            std::uint32_t b);

CliffordElement geometric_product(const CliffordElement& a, const CliffordElement& b);
Parity grading(const CliffordElement& a);

// reversal anti-involution (blade order reversed) and grade involution
CliffordElement reversal(const CliffordElement& a);
CliffordElement grade_involution(const CliffordElement& a);
// S(u) = reversal(grade_involution(u)) * u
CliffordElement spinor_norm(const CliffordElement& a);

// left inverse by solving u x = 1; empty when singular.  Exact for (scaled)
// blades; elsewhere a dense rational solve bounded to dimension <= 8.
std::optional<CliffordElement> clifford_inverse(const CliffordElement& u);

enum class GroupMembership { Member, NotMember, Inconclusive };

// twisted Clifford group test: grade_involution(u) e_i u^{-1} must land in
// the grade-1 subspace for every generator
GroupMembership twisted_group_membership(const CliffordElement& u, double tol = 1e-10);

// graded tensor product realized inside the combined algebra
// C(p_a + p_b, q_a + q_b); generator blocks keep their order
CliffordElement graded_tensor_product(const CliffordElement& a, const CliffordElement& b);

// structure classification for p + q <= 2 by idempotent/center computation
std::string classify_small(const Signature& sig);

struct ChevalleyReport {
  bool multiplicative = false;     // zeta(uv) = zeta(u) zeta(v) on all samples
  bool generators_roundtrip = false;  // upsilon(zeta(e)) = e exactly
  int trials = 0;
};

// checks the splitting of the combined algebra into the graded tensor
// product of the block algebras, with the tensor side multiplied by the
// Koszul sign rule independently of the combined product
ChevalleyReport chevalley_isomorphism_check(const Signature& sig_h,
                                            const Signature& sig_v, int trials,
                                            std::uint64_t seed = 0x5eed);

}  // namespace anisogeo
