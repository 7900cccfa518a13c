#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "anisogeo/geometry.hpp"
#include "tests/fd_oracles.hpp"

using namespace anisogeo;

namespace {

ChartPoint vp(std::vector<double> u, int n, int m) {
  return ChartPoint(n, m, FiberKind::Vector, std::move(u));
}

MatD random_spd(std::mt19937& rng, int d) {
  std::uniform_real_distribution<double> U(-0.7, 0.7);
  MatD A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = U(rng);
  MatD S(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = i == j ? 1.5 : 0.0;
      for (int k = 0; k < d; ++k) acc += A(i, k) * A(j, k);
      S(i, j) = acc;
    }
  return S;
}

}  // namespace

TEST_CASE("zero N-connection gives identity frames") {
  ZeroNConnection N(2, 2, FiberKind::Vector);
  AdaptedFrame f = adapted_frame(N, vp({0.1, 0.2, 0.3, 0.4}, 2, 2));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(f.D(i, j) == (i == j ? 1.0 : 0.0));
      CHECK(f.C(i, j) == (i == j ? 1.0 : 0.0));
    }
}

TEST_CASE("frame elongation signs, both bundle kinds") {
  MatD N(1, 1);
  N(0, 0) = 3.0;
  AdaptedFrame f = adapted_frame(N, 1, 1, FiberKind::Vector);
  // columns of D are frame vectors: delta_x = d_x - 3 d_y
  CHECK(f.D(1, 0) == -3.0);
  CHECK(f.C(1, 0) == 3.0);
  MatD CD = matmul(f.C, f.D);
  CHECK(CD(0, 0) == doctest::Approx(1.0));
  CHECK(CD(1, 0) == doctest::Approx(0.0).epsilon(1e-14));

  AdaptedFrame fc = adapted_frame(N, 1, 1, FiberKind::Covector);
  CHECK(fc.D(1, 0) == 3.0);
  CHECK(fc.C(1, 0) == -3.0);
  MatD CDc = matmul(fc.C, fc.D);
  CHECK(CDc(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("frame duality for expression-defined connections") {
  std::vector<Expr> entries;
  const char* src[4] = {"x1*y2", "sin(x2)+y1^2", "exp(x1/2)*y1", "x2^2-y2"};
  for (auto s : src) entries.push_back(Expr::parse(s, 2, 2, FiberKind::Vector));
  ExprNConnection N(2, 2, FiberKind::Vector, entries);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    ChartPoint u = vp({U(rng), U(rng), U(rng), U(rng)}, 2, 2);
    AdaptedFrame f = adapted_frame(N, u);
    MatD CD = matmul(f.C, f.D);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(std::abs(CD(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("anholonomy vanishes for the holonomic frame") {
  ZeroNConnection N(2, 3, FiberKind::Vector);
  Ten3D w = anholonomy_coefficients(N, vp({0.1, 0.2, 1.0, 2.0, 0.5}, 2, 3));
  for (double v : w.a) CHECK(v == 0.0);
}

TEST_CASE("anholonomy block structure and finite-difference commutators") {
  std::vector<Expr> entries;
  const char* src[4] = {"x1*y2+y1^2", "cos(x2)*y1", "x1+x2*y2", "y1*y2"};
  for (auto s : src) entries.push_back(Expr::parse(s, 2, 2, FiberKind::Vector));
  ExprNConnection N(2, 2, FiberKind::Vector, entries);
  ChartPoint u = vp({0.4, -0.3, 0.8, 1.2}, 2, 2);
  Ten3D w = anholonomy_coefficients(N, u);

  // h-output components and fiber-fiber commutators are structurally zero
  for (int al = 0; al < 2; ++al)
    for (int b = 0; b < 4; ++b)
      for (int g = 0; g < 4; ++g) CHECK(std::abs(w(al, b, g)) < 1e-12);
  for (int al = 0; al < 4; ++al)
    for (int b = 2; b < 4; ++b)
      for (int g = 2; g < 4; ++g) CHECK(std::abs(w(al, b, g)) < 1e-12);

  // finite-difference commutator of the frame vector fields
  auto frame_comp = [&](std::span<const double> coords, int beta, int mu) {
    if (beta == mu) return 1.0;
    if (beta < 2 && mu >= 2) {
      ChartPoint p(2, 2, FiberKind::Vector, std::vector<double>(coords.begin(), coords.end()));
      return -N.values(p)(beta, mu - 2);
    }
    return 0.0;
  };
  for (int b = 0; b < 4; ++b)
    for (int g = 0; g < 4; ++g)
      for (int mu = 0; mu < 4; ++mu) {
        double comm = 0.0;
        for (int nu = 0; nu < 4; ++nu) {
          auto fg = [&](std::span<const double> c) { return frame_comp(c, g, mu); };
          auto fb = [&](std::span<const double> c) { return frame_comp(c, b, mu); };
          comm += frame_comp(u.u, b, nu) * testing::fd_partial(fg, u.u, nu);
          comm -= frame_comp(u.u, g, nu) * testing::fd_partial(fb, u.u, nu);
        }
        // expand w back into coordinate components for comparison
        double expect = 0.0;
        AdaptedFrame f = adapted_frame(N, u);
        for (int al = 0; al < 4; ++al) expect += w(al, b, g) * f.D(mu, al);
        CHECK(std::abs(comm - expect) < 1e-6);
      }
}

TEST_CASE("anholonomy h-h commutators reproduce the N-curvature") {
  // N linear in y with x-dependent coefficients
  std::vector<Expr> entries;
  const char* src[4] = {"x1*y1+0.3*y2", "x2*y2", "sin(x1)*y1", "x1*x2*y2"};
  for (auto s : src) entries.push_back(Expr::parse(s, 2, 2, FiberKind::Vector));
  ExprNConnection N(2, 2, FiberKind::Vector, entries);
  ChartPoint u = vp({0.7, 0.2, 1.1, -0.4}, 2, 2);
  Ten3D w = anholonomy_coefficients(N, u);
  Ten3D omega = nconn_curvature(N, u);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(w(2 + a, i, j) == doctest::Approx(omega(a, i, j)).epsilon(1e-12));
}

TEST_CASE("N-curvature examples") {
  ZeroNConnection Z(2, 2, FiberKind::Vector);
  Ten3D o0 = nconn_curvature(Z, vp({0, 0, 1, 1}, 2, 2));
  for (double v : o0.a) CHECK(v == 0.0);

  // x-only N: the fiber-derivative terms drop out
  std::vector<Expr> entries;
  const char* src[4] = {"x1*x2", "sin(x2)", "x1^2", "cos(x1)"};
  for (auto s : src) entries.push_back(Expr::parse(s, 2, 2, FiberKind::Vector));
  ExprNConnection N(2, 2, FiberKind::Vector, entries);
  ChartPoint u = vp({0.5, 0.3, 0.7, 0.9}, 2, 2);
  Ten3D o = nconn_curvature(N, u);
  auto dN = [&](int i, int a, int k) {
    auto f = [&](std::span<const double> c) {
      ChartPoint p(2, 2, FiberKind::Vector, std::vector<double>(c.begin(), c.end()));
      return N.values(p)(i, a);
    };
    return testing::fd_partial(f, u.u, k);
  };
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(o(a, i, j) == doctest::Approx(dN(i, a, j) - dN(j, a, i)).epsilon(1e-6));

  // antisymmetry is exact by assembly
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(o(a, i, j) == -o(a, j, i));
}

TEST_CASE("compatible N from a full metric") {
  MatD G(2, 2);
  G(0, 0) = 2.0;
  G(0, 1) = G(1, 0) = 0.5;
  G(1, 1) = 1.0;
  MatD N = nconn_from_metric(G, 1, 1);
  CHECK(N(0, 0) == doctest::Approx(0.5));

  // block-diagonal input gives zero
  MatD Gb(4, 4);
  for (int i = 0; i < 4; ++i) Gb(i, i) = 1.0 + i;
  MatD Nb = nconn_from_metric(Gb, 2, 2);
  for (double v : Nb.a) CHECK(v == 0.0);

  // round trip through the adapted-frame assembly at random SPD metrics
  std::mt19937 rng(99);
  for (int t = 0; t < 50; ++t) {
    MatD S = random_spd(rng, 4);
    MatD N4 = nconn_from_metric(S, 2, 2);
    // G(delta_i, d_a) must vanish after splitting
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a) {
        double acc = S(i, 2 + a);
        for (int b = 0; b < 2; ++b) acc -= N4(i, b) * S(2 + b, 2 + a);
        CHECK(std::abs(acc) < 1e-10);
      }
    // d-metric assembly reproduces N
    MatD g(2, 2), h(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) h(a, b) = S(2 + a, 2 + b);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double acc = S(i, j);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) acc -= h(a, b) * N4(i, a) * N4(j, b);
        g(i, j) = acc;
      }
    MatD Gre(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double acc = g(i, j);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) acc += h(a, b) * N4(i, a) * N4(j, b);
        Gre(i, j) = acc;
      }
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a) {
        double acc = 0;
        for (int b = 0; b < 2; ++b) acc += h(a, b) * N4(i, b);
        Gre(i, 2 + a) = acc;
        Gre(2 + a, i) = acc;
      }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) Gre(2 + a, 2 + b) = h(a, b);
    MatD Nre = nconn_from_metric(Gre, 2, 2);
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a)
        CHECK(std::abs(Nre(i, a) - N4(i, a)) < 1e-10);
  }
}

TEST_CASE("second-order osculator dual coefficients") {
  MatD z(1, 1);
  auto [M1z, M2z] = osc2_dual_coefficients(z, z);
  CHECK(M1z(0, 0) == 0.0);
  CHECK(M2z(0, 0) == 0.0);

  MatD N1(1, 1), N2(1, 1);
  N1(0, 0) = 2.0;
  N2(0, 0) = 3.0;
  auto [M1, M2] = osc2_dual_coefficients(N1, N2);
  CHECK(M1(0, 0) == 2.0);
  CHECK(M2(0, 0) == 7.0);  // N2 + N1 N1

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int t = 0; t < 100; ++t) {
    MatD A(3, 3), B(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        A(i, j) = U(rng);
        B(i, j) = U(rng);
      }
    auto [Nhat, Mhat] = osc2_frame_matrices(A, B);
    MatD P = matmul(Mhat, Nhat);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j)
        CHECK(std::abs(P(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("covector elongation enters adapted derivatives with opposite sign") {
  std::vector<Expr> entries{Expr::parse("x1*p1", 1, 1, FiberKind::Covector)};
  ExprNConnection N(1, 1, FiberKind::Covector, entries);
  ChartPoint u(1, 1, FiberKind::Covector, {0.5, 2.0});
  MatJ Nj = N.eval(u, 1);
  Expr f = Expr::parse("x1^2*p1", 1, 1, FiberKind::Covector);
  auto coords = std::vector<Jet>{Jet::variable(2, 2, 0, 0.5), Jet::variable(2, 2, 1, 2.0)};
  Jet fj = f.eval<Jet>(coords);
  // delta_x f = d_x f + N d_p f
  double expect = 2.0 * 0.5 * 2.0 + (0.5 * 2.0) * (0.5 * 0.5);
  Jet d = hderiv(fj, Nj, 1, 1, FiberKind::Covector, 0);
  CHECK(d.value() == doctest::Approx(expect));
}
