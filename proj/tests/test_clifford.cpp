#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "anisogeo/clifford.hpp"

using namespace anisogeo;

namespace {

CliffordElement rnd_element(std::mt19937_64& rng, Signature sig, int blades = 4) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> mask(0, (1 << sig.dim()) - 1);
  CliffordElement e(sig);
  for (int t = 0; t < blades; ++t) {
    int c = coeff(rng);
    if (c == 0) c = 2;
    std::uint32_t m = static_cast<std::uint32_t>(mask(rng));
    e.set(m, e.coeff(m) + Rational(c));
  }
  return e;
}

}  // namespace

TEST_CASE("generator relations") {
  Signature s10{1, 0};
  CliffordElement e1 = CliffordElement::generator(s10, 0);
  CHECK(e1 * e1 == CliffordElement::scalar(s10, Rational(-1)));

  Signature s02{0, 2};
  CliffordElement a = CliffordElement::generator(s02, 0);
  CliffordElement b = CliffordElement::generator(s02, 1);
  CHECK(a * a == CliffordElement::scalar(s02, Rational(1)));
  CHECK(a * b == -(b * a));

  // (e1 e2)^2 in C(0,2): reorder once, contract twice: -1... +...
  CliffordElement e12 = a * b;
  CHECK(e12 * e12 == CliffordElement::scalar(s02, Rational(-1)));

  Signature s20{2, 0};
  CliffordElement i = CliffordElement::generator(s20, 0);
  CliffordElement j = CliffordElement::generator(s20, 1);
  CliffordElement k = i * j;
  CHECK(k * k == CliffordElement::scalar(s20, Rational(-1)));
}

TEST_CASE("blade basis has dimension 2^(p+q) and products close over it") {
  for (Signature sig : {Signature{0, 3}, Signature{2, 1}, Signature{1, 2}}) {
    int N = 1 << sig.dim();
    // products of all basis blades land on single basis blades with sign
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < N; ++y) {
        auto [m, s] = blade_product(sig, x, y);
        CHECK(static_cast<int>(m) < N);
        CHECK((s == 1 || s == -1));
        CHECK(m == static_cast<std::uint32_t>(x ^ y));
      }
  }
}

TEST_CASE("associativity, exact, random triples up to dimension 8") {
  std::mt19937_64 rng(42);
  for (Signature sig : {Signature{0, 2}, Signature{2, 0}, Signature{1, 2},
                        Signature{3, 1}, Signature{2, 4}, Signature{4, 4}}) {
    for (int t = 0; t < 500; ++t) {
      CliffordElement a = rnd_element(rng, sig);
      CliffordElement b = rnd_element(rng, sig);
      CliffordElement c = rnd_element(rng, sig);
      CHECK((a * b) * c == a * (b * c));
    }
  }
}

TEST_CASE("Z/2 grading under products") {
  std::mt19937_64 rng(43);
  Signature sig{1, 3};
  CHECK(grading(CliffordElement::scalar(sig, Rational(1))) == Parity::Even);
  CHECK(grading(CliffordElement::generator(sig, 0)) == Parity::Odd);
  CliffordElement mixed = CliffordElement::scalar(sig, Rational(1));
  mixed.set(0b11, Rational(1));
  CHECK(grading(mixed) == Parity::Even);
  mixed.set(0b100, Rational(2));
  CHECK(grading(mixed) == Parity::Mixed);

  auto homogeneous = [&](Parity want) {
    CliffordElement e(sig);
    std::uniform_int_distribution<int> mask(0, 15);
    while (true) {
      int m = mask(rng);
      bool odd = std::popcount(static_cast<unsigned>(m)) % 2;
      if ((want == Parity::Odd) == odd) {
        e.set(m, Rational(1 + (m % 3)));
        return e;
      }
    }
  };
  for (int t = 0; t < 100; ++t) {
    for (Parity pa : {Parity::Even, Parity::Odd})
      for (Parity pb : {Parity::Even, Parity::Odd}) {
        CliffordElement ab = homogeneous(pa) * homogeneous(pb);
        Parity expect = pa == pb ? Parity::Even : Parity::Odd;
        if (!ab.is_zero()) CHECK(grading(ab) == expect);
      }
  }
}

TEST_CASE("reversal is an anti-automorphism; grade-2 blades flip sign") {
  Signature sig{0, 3};
  CliffordElement e1 = CliffordElement::generator(sig, 0);
  CliffordElement e2 = CliffordElement::generator(sig, 1);
  CHECK(reversal(e1 * e2) == -(e1 * e2));
  CHECK(reversal(e1 * e2) == e2 * e1);
  std::mt19937_64 rng(44);
  for (int t = 0; t < 200; ++t) {
    CliffordElement a = rnd_element(rng, sig);
    CliffordElement b = rnd_element(rng, sig);
    CHECK(reversal(a * b) == reversal(b) * reversal(a));
  }
}

TEST_CASE("spinor norm on vectors and the unit") {
  Signature sig{0, 1};
  CliffordElement v = CliffordElement::generator(sig, 0) * Rational(3);
  // S(v) = reversal(grade_involution(v)) v = (-3 e1)(3 e1) = -9
  CHECK(spinor_norm(v) == CliffordElement::scalar(sig, Rational(-9)));
  CHECK(spinor_norm(CliffordElement::scalar(sig, Rational(1))) ==
        CliffordElement::scalar(sig, Rational(1)));

  // multiplicativity on vectors: S(u u') = S(u) S(u')
  std::mt19937_64 rng(45);
  Signature s3{1, 2};
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int t = 0; t < 200; ++t) {
    CliffordElement u(s3), w(s3);
    for (int i = 0; i < 3; ++i) {
      u.set(1u << i, Rational(coeff(rng)));
      w.set(1u << i, Rational(coeff(rng)));
    }
    CliffordElement lhs = spinor_norm(u * w);
    CliffordElement rhs = spinor_norm(u) * spinor_norm(w);
    CHECK(lhs == rhs);
    // S(u) = -G(u) for vectors: minus the metric square
    CliffordElement sq = u * u;  // = G(u) * 1
    CHECK(spinor_norm(u) == -sq);
  }
}

TEST_CASE("twisted group membership") {
  Signature s02{0, 2};
  CHECK(twisted_group_membership(CliffordElement::generator(s02, 0)) ==
        GroupMembership::Member);
  CHECK(twisted_group_membership(CliffordElement::scalar(s02, Rational(1))) ==
        GroupMembership::Member);

  Signature s03{0, 3};
  CliffordElement u = CliffordElement::scalar(s03, Rational(1));
  u.set(0b111, Rational(1));  // 1 + e1 e2 e3
  CHECK(twisted_group_membership(u) == GroupMembership::NotMember);

  // products of invertible vectors always belong
  std::mt19937_64 rng(46);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int t = 0; t < 40; ++t) {
    CliffordElement v1(s03), v2(s03);
    for (int i = 0; i < 3; ++i) {
      v1.set(1u << i, Rational(coeff(rng)));
      v2.set(1u << i, Rational(coeff(rng)));
    }
    CliffordElement p = v1 * v2;
    if ((v1 * v1).is_zero() || (v2 * v2).is_zero()) continue;
    CHECK(twisted_group_membership(p) == GroupMembership::Member);
  }

  // non-invertible element
  Signature s01{0, 1};
  CliffordElement z = CliffordElement::scalar(s01, Rational(1));
  z.set(1, Rational(1));  // (1 + e1) has (1 - e1)(1 + e1) = 0
  CHECK(twisted_group_membership(z) == GroupMembership::NotMember);
}

TEST_CASE("spinor norm is multiplicative on twisted-group elements") {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> coeff(-2, 3);
  Signature sig{1, 2};
  auto random_vector = [&]() {
    CliffordElement v(sig);
    for (int i = 0; i < 3; ++i) v.set(1u << i, Rational(coeff(rng)));
    return v;
  };
  int done = 0;
  while (done < 60) {
    // products of invertible vectors lie in the twisted group
    CliffordElement u = random_vector() * random_vector();
    CliffordElement w = random_vector() * random_vector();
    if (!clifford_inverse(u) || !clifford_inverse(w)) continue;
    ++done;
    CHECK(spinor_norm(u * w) == spinor_norm(u) * spinor_norm(w));
  }
}

TEST_CASE("small-signature classification") {
  CHECK(classify_small({1, 0}) == "C");
  CHECK(classify_small({0, 1}) == "R+R");
  CHECK(classify_small({2, 0}) == "H");
  CHECK(classify_small({0, 2}) == "M2(R)");
  CHECK(classify_small({1, 1}) == "M2(R)");
  CHECK(classify_small({0, 0}) == "R");
}

TEST_CASE("graded tensor product realizes the Koszul sign") {
  Signature s{1, 0};
  CliffordElement one = CliffordElement::scalar(s, Rational(1));
  CliffordElement e = CliffordElement::generator(s, 0);

  CliffordElement t11 = graded_tensor_product(one, one);
  CHECK(t11 == CliffordElement::scalar({2, 0}, Rational(1)));

  // (e (x) 1)(1 (x) f) = -(1 (x) f)(e (x) 1)
  CliffordElement a = graded_tensor_product(e, one);
  CliffordElement b = graded_tensor_product(one, e);
  CHECK(a * b == -(b * a));

  // embedding consistency: (e (x) 1)^2 matches e^2 in the combined algebra
  CHECK(a * a == CliffordElement::scalar({2, 0}, Rational(-1)));
}

TEST_CASE("block splitting of the combined algebra") {
  // dimension count example
  ChevalleyReport r = chevalley_isomorphism_check({1, 0}, {1, 0}, 50);
  CHECK(r.multiplicative);
  CHECK(r.generators_roundtrip);

  ChevalleyReport r2 = chevalley_isomorphism_check({0, 2}, {2, 0}, 200);
  CHECK(r2.multiplicative);
  CHECK(r2.generators_roundtrip);

  // every split of combined dimension <= 6
  for (int d1 = 0; d1 <= 3; ++d1)
    for (int p1 = 0; p1 <= d1; ++p1)
      for (int d2 = 0; d2 <= 3; ++d2)
        for (int p2 = 0; p2 <= d2; ++p2) {
          if (d1 + d2 == 0) continue;
          ChevalleyReport rr = chevalley_isomorphism_check(
              {p1, d1 - p1}, {p2, d2 - p2}, 40, 1234 + p1 + 10 * p2);
          CHECK(rr.multiplicative);
          CHECK(rr.generators_roundtrip);
        }
}

TEST_CASE("rational arithmetic normalizes and guards overflow") {
  Rational a(6, -4);
  CHECK(a.num() == -3);
  CHECK(a.den() == 2);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), CliffordError);
}
