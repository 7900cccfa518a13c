#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "anisogeo/curvature.hpp"
#include "anisogeo/engine.hpp"
#include "tests/fd_oracles.hpp"

using namespace anisogeo;

namespace {

Expr vexpr(const char* s) { return Expr::parse(s, 2, 2, FiberKind::Vector); }

Space finsler(const char* f) {
  SpaceSpec s;
  s.cls = SpaceClass::Finsler;
  s.n = s.m = 2;
  s.fundamental = vexpr(f);
  return Space::make(s);
}

const char* kSphere = "sqrt(y1^2+sin(x1)^2*y2^2)";
const char* kRanders = "sqrt(y1^2+y2^2)+0.3*y1";

MatD sphere_metric(std::span<const double> x) {
  MatD a(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = std::sin(x[0]) * std::sin(x[0]);
  return a;
}

}  // namespace

TEST_CASE("flat space: no torsion, no curvature") {
  Space s = finsler("sqrt(y1^2+y2^2)");
  Engine e(s);
  PointEvaluation ev = e.evaluate(s.point({0.2, 0.4, 1.0, 0.7}));
  for (double v : ev.torsion.Thhh.a) CHECK(std::abs(v) < 1e-13);
  for (double v : ev.torsion.Thhv.a) CHECK(std::abs(v) < 1e-13);
  for (double v : ev.torsion.Phvv.a) CHECK(std::abs(v) < 1e-13);
  for (double v : ev.curvature.Rh.a) CHECK(std::abs(v) < 1e-13);
  for (double v : ev.curvature.Sv.a) CHECK(std::abs(v) < 1e-13);
  CHECK(std::abs(ev.scalar.total) < 1e-12);
  for (double v : ev.einstein.hh.a) CHECK(std::abs(v) < 1e-12);
  for (double v : ev.phi.hh.a) CHECK(std::abs(v) < 1e-12);
  for (double v : ev.weyl.a) CHECK(std::abs(v) < 1e-12);
  BianchiResiduals b =
      bianchi_residuals(e.metric_field(), e.nconn_field(), e.connection(), ev.u);
  CHECK(b.first < 1e-12);
  CHECK(b.second < 1e-10);
}

TEST_CASE("torsion structure per connection family") {
  Space s = finsler("sqrt(exp(2*x1)*y1^2+(1+0.3*sin(x2))*y2^2)+0.2*y1");
  SpaceMetricField gf(s);
  auto Nf = s.nconn_field();
  ChartPoint u = s.point({0.4, 0.7, 0.9, 0.5});
  MatJ Nj = Nf->eval(u, 2);

  // the symmetric-family blocks of the Christoffel d-symbols vanish exactly
  DConnBlocksJ chr = build_dconnection_jets(gf, *Nf, ConnectionType::Christoffel, u, 1);
  TorsionBlocks Tc = dtorsion(chr, Nj);
  for (double v : Tc.Thhh.a) CHECK(v == 0.0);
  for (double v : Tc.Svvv.a) CHECK(v == 0.0);

  // the Berwald hv-torsion is zero by construction
  DConnBlocksJ ber = build_dconnection_jets(gf, *Nf, ConnectionType::Berwald, u, 1);
  TorsionBlocks Tb = dtorsion(ber, Nj);
  for (double v : Tb.Phvv.a) CHECK(v == 0.0);

  // the hh->v torsion equals the N-connection curvature for every family
  Ten3D omega = nconn_curvature(*Nf, u);
  for (auto type : {ConnectionType::Christoffel, ConnectionType::Berwald,
                    ConnectionType::Canonical}) {
    DConnBlocksJ G = build_dconnection_jets(gf, *Nf, type, u, 1);
    TorsionBlocks T = dtorsion(G, Nj);
    for (std::size_t i = 0; i < T.Thhv.a.size(); ++i)
      CHECK(std::abs(T.Thhv.a[i] - omega.a[i]) < 1e-10);
  }

  // canonical connection on a quadratic space: only the Omega block survives
  Space sq = finsler("sqrt(exp(2*x1)*y1^2+y2^2)");
  SpaceMetricField gq(sq);
  auto Nq = sq.nconn_field();
  DConnBlocksJ can = build_dconnection_jets(gq, *Nq, ConnectionType::Canonical, u, 1);
  TorsionBlocks Tq = dtorsion(can, Nq->eval(u, 2));
  for (double v : Tq.Thhh.a) CHECK(std::abs(v) < 1e-12);
  for (double v : Tq.Svvv.a) CHECK(std::abs(v) < 1e-12);
  for (double v : Tq.Phvv.a) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("quadratic reduction to the base Riemann tensor") {
  Space s = finsler(kSphere);
  Engine e(s);
  ChartPoint u = s.point({1.1, 0.4, 0.8, 0.6});
  PointEvaluation ev = e.evaluate(u);

  Ten4D R = testing::fd_riemann(sphere_metric, std::span<const double>(u.u).subspan(0, 2));
  for (int i = 0; i < 2; ++i)
    for (int h = 0; h < 2; ++h)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          CHECK(std::abs(ev.curvature.Rh(i, h, j, k) - R(i, h, j, k)) < 1e-5);
          CHECK(std::abs(ev.curvature.Rv(i, h, j, k) - R(i, h, j, k)) < 1e-5);
        }
  for (double v : ev.curvature.Sv.a) CHECK(std::abs(v) < 1e-10);
  for (double v : ev.curvature.Sh.a) CHECK(std::abs(v) < 1e-10);
  for (double v : ev.curvature.Ph.a) CHECK(std::abs(v) < 1e-10);

  // sectional component of the round sphere at unit radius
  double s2 = std::sin(1.1) * std::sin(1.1);
  CHECK(std::abs(std::abs(ev.curvature.Rh(0, 1, 0, 1)) - s2) < 1e-5);

  // Ricci blocks: the base Ricci in the h-block, mixed blocks vanish
  MatD ric = testing::fd_ricci(sphere_metric, std::span<const double>(u.u).subspan(0, 2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(ev.ric.hh(i, j) - ric(i, j)) < 1e-5);
  for (double v : ev.ric.hv.a) CHECK(std::abs(v) < 1e-8);
  for (double v : ev.ric.vh.a) CHECK(std::abs(v) < 1e-8);

  // the unit sphere is Einstein: Ric = g, scalar curvature 2
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(ev.ric.hh(i, j) - ev.g(i, j)) < 1e-5);
  CHECK(std::abs(ev.scalar.horizontal - 2.0) < 1e-4);
  CHECK(std::abs(ev.scalar.vertical) < 1e-10);
  CHECK(ev.scalar.total == ev.scalar.horizontal + ev.scalar.vertical);

  // 2d Einstein tensor of the h-block vanishes
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double ghh = ev.ric.hh(i, j) - 0.5 * ev.scalar.total * ev.g(i, j);
      CHECK(std::abs(ev.einstein.hh(i, j) - ghh) < 1e-12);
    }

  BianchiResiduals b =
      bianchi_residuals(e.metric_field(), e.nconn_field(), e.connection(), u);
  CHECK(b.first < 1e-5);
  CHECK(b.second < 1e-5);
}

TEST_CASE("curvature antisymmetry is exact by assembly") {
  Space s = finsler(kRanders);
  Engine e(s);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.3, 1.2);
  for (int t = 0; t < 5; ++t) {
    PointEvaluation ev = e.evaluate(s.point({U(rng), U(rng), U(rng), U(rng)}));
    const CurvatureBlocks& C = ev.curvature;
    for (int i = 0; i < 2; ++i)
      for (int h = 0; h < 2; ++h)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) {
            CHECK(C.Rh(i, h, j, k) == -C.Rh(i, h, k, j));
            CHECK(C.Rv(i, h, j, k) == -C.Rv(i, h, k, j));
            CHECK(C.Sh(i, h, j, k) == -C.Sh(i, h, k, j));
            CHECK(C.Sv(i, h, j, k) == -C.Sv(i, h, k, j));
          }
    const TorsionBlocks& T = ev.torsion;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          CHECK(T.Thhh(i, j, k) == -T.Thhh(i, k, j));
          CHECK(T.Thhv(i, j, k) == -T.Thhv(i, k, j));
          CHECK(T.Svvv(i, j, k) == -T.Svvv(i, k, j));
        }
  }
}

TEST_CASE("flat-base Randers: scalar curvature against an independent pipeline") {
  // with a base-independent fundamental function the entire geometry sits in
  // the fiber: the total scalar curvature equals the scalar curvature of the
  // fiber metric treated as a Riemannian metric in the y variables
  Space s = finsler(kRanders);
  Engine e(s);
  ChartPoint u = s.point({0.3, 0.6, 1.0, 0.4});
  PointEvaluation ev = e.evaluate(u);
  CHECK(std::abs(ev.scalar.horizontal) < 1e-10);

  // closed-form fiber metric of F = |y| + b.y, then two difference layers
  const double b1 = 0.3, b2 = 0.0;
  auto fiber_metric = [&](std::span<const double> y) {
    double r = std::hypot(y[0], y[1]);
    double beta = b1 * y[0] + b2 * y[1];
    double yh[2] = {y[0] / r, y[1] / r};
    double bb[2] = {b1, b2};
    MatD g(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        g(a, c) = (a == c ? 1.0 : 0.0) +
                  (beta / r) * ((a == c ? 1.0 : 0.0) - yh[a] * yh[c]) +
                  yh[a] * bb[c] + yh[c] * bb[a] + bb[a] * bb[c];
    return g;
  };
  std::vector<double> y0{u.u[2], u.u[3]};
  // degree-one homogeneity makes this a cone metric: flat off the origin
  double oracle = testing::fd_scalar_curvature(fiber_metric, y0);
  CHECK(std::abs(oracle) < 1e-5);
  CHECK(std::abs(ev.scalar.total - oracle) < 1e-4);
}

TEST_CASE("curved fiber sector against the Riemannian oracle") {
  // base-independent fiber-dependent metric blocks: the v-sector is the
  // Riemannian geometry of h_ab(y) in the y variables
  SpaceSpec spec;
  spec.cls = SpaceClass::GLagrange;
  spec.n = spec.m = 2;
  const char* comps[4] = {"1+0.4*y2^2", "0.1*y1*y2", "0.1*y1*y2", "1+0.4*y1^2"};
  for (auto c : comps) spec.metric_components.push_back(vexpr(c));
  for (int i = 0; i < 4; ++i) spec.n_connection.push_back(vexpr("0"));
  Space s = Space::make(spec);
  Engine e(s);
  ChartPoint u = s.point({0.2, 0.5, 0.7, 0.3});
  PointEvaluation ev = e.evaluate(u);

  auto fiber_metric = [&](std::span<const double> y) {
    MatD g(2, 2);
    g(0, 0) = 1 + 0.4 * y[1] * y[1];
    g(0, 1) = g(1, 0) = 0.1 * y[0] * y[1];
    g(1, 1) = 1 + 0.4 * y[0] * y[0];
    return g;
  };
  std::vector<double> y0{u.u[2], u.u[3]};
  Ten4D Ro = testing::fd_riemann(fiber_metric, y0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          CHECK(std::abs(ev.curvature.Sv(a, b, c, d) - Ro(a, b, c, d)) < 1e-5);
  double oracle = testing::fd_scalar_curvature(fiber_metric, y0);
  CHECK(std::abs(oracle) > 0.1);  // the sector is genuinely curved
  CHECK(std::abs(ev.scalar.vertical - oracle) < 1e-4);
}

TEST_CASE("Ricci and scalar of the v-sector for anisotropic metrics") {
  Space s = finsler(kRanders);
  Engine e(s);
  ChartPoint u = s.point({0.1, 0.9, 1.2, 0.5});
  PointEvaluation ev = e.evaluate(u);
  // x-independent data: mixed Ricci blocks vanish, S-part carries everything
  for (double v : ev.ric.hv.a) CHECK(std::abs(v) < 1e-10);
  for (double v : ev.ric.vh.a) CHECK(std::abs(v) < 1e-10);
  CHECK(ev.scalar.total == ev.scalar.horizontal + ev.scalar.vertical);
}

TEST_CASE("Phi tensor is trace-free") {
  for (const char* f : {kSphere, kRanders, "sqrt(exp(2*x1)*y1^2+y2^2)"}) {
    Space s = finsler(f);
    Engine e(s);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> U(0.5, 1.2);
    for (int t = 0; t < 10; ++t) {
      PointEvaluation ev = e.evaluate(s.point({U(rng), U(rng), U(rng), U(rng)}));
      CHECK(std::abs(phi_trace(ev.phi, ev.g, ev.h)) < 1e-10);
    }
  }
}

TEST_CASE("Weyl tensor: conformally flat total space") {
  // harmonic conformal factor on the base block: the full pipeline runs
  // through nontrivial connection coefficients and cancels
  SpaceSpec spec;
  spec.cls = SpaceClass::GLagrange;
  spec.n = spec.m = 2;
  const char* phi = "exp(0.6*x1+0.2*(x1^2-x2^2))";  // e^{2 phi}, phi harmonic
  for (int i = 0; i < 4; ++i)
    spec.metric_components.push_back(vexpr(i % 3 == 0 ? phi : "0"));
  for (int i = 0; i < 4; ++i) spec.n_connection.push_back(vexpr("0"));
  Space s = Space::make(spec);
  Engine e(s);
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> U(-0.4, 0.4);
  for (int t = 0; t < 10; ++t) {
    PointEvaluation ev = e.evaluate(s.point({U(rng), U(rng), U(rng), U(rng)}));
    // the connection itself is nontrivial
    double lmax = 0;
    for (double v : ev.gamma.Lh.a) lmax = std::max(lmax, std::abs(v));
    CHECK(lmax > 0.05);
    for (double v : ev.weyl.a) CHECK(std::abs(v) < 1e-6);
    CHECK(weyl_trace_residual(ev.weyl) < 1e-8);
  }
}

TEST_CASE("Weyl tensor: trace-free on random curvature input") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int n = 2, m = 2, d = 4;
  for (int trial = 0; trial < 20; ++trial) {
    // random SPD block metrics
    MatD g(2, 2), h(2, 2);
    g(0, 0) = 1.5 + U(rng);
    g(1, 1) = 1.5 + U(rng);
    g(0, 1) = g(1, 0) = 0.3 * U(rng);
    h(0, 0) = 1.5 + U(rng);
    h(1, 1) = 1.5 + U(rng);
    h(0, 1) = h(1, 0) = 0.3 * U(rng);
    // random lowered curvature, antisymmetric in both pairs, zero on mixed
    // first-pair blocks (the split-preserving structure)
    Ten4D L(d, d, d, d);
    for (int ga = 0; ga < d; ++ga)
      for (int de = 0; de < d; ++de)
        for (int al = 0; al < d; ++al)
          for (int be = 0; be < d; ++be) L(ga, de, al, be) = U(rng);
    Ten4D A(d, d, d, d);
    for (int ga = 0; ga < d; ++ga)
      for (int de = 0; de < d; ++de) {
        bool like = (ga < n) == (de < n);
        for (int al = 0; al < d; ++al)
          for (int be = 0; be < d; ++be)
            A(ga, de, al, be) =
                like ? 0.25 * (L(ga, de, al, be) - L(de, ga, al, be) -
                               L(ga, de, be, al) + L(de, ga, be, al))
                     : 0.0;
      }
    // raise the second slot with the block metrics to get R^{.de}_{ga.al be}
    MatD gi = inverse(g), hi = inverse(h);
    auto ginv_full = [&](int x, int y) -> double {
      if (x < n && y < n) return gi(x, y);
      if (x >= n && y >= n) return hi(x - n, y - n);
      return 0.0;
    };
    CurvatureBlocks C(FiberKind::Vector, n, m);
    auto rfull = [&](int de, int ga, int al, int be) {
      double acc = 0;
      for (int t = 0; t < d; ++t) acc += ginv_full(de, t) * A(ga, t, al, be);
      return acc;
    };
    for (int i = 0; i < n; ++i)
      for (int hh = 0; hh < n; ++hh)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) C.Rh(i, hh, j, k) = rfull(i, hh, j, k);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) C.Rv(a, b, j, k) = rfull(n + a, n + b, j, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int c = 0; c < m; ++c) C.Ph(i, j, k, c) = rfull(i, j, k, n + c);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int k = 0; k < n; ++k)
          for (int c = 0; c < m; ++c) C.Pv(a, b, k, c) = rfull(n + a, n + b, k, n + c);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c) C.Sh(i, j, b, c) = rfull(i, j, n + b, n + c);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          for (int e2 = 0; e2 < m; ++e2)
            C.Sv(a, b, c, e2) = rfull(n + a, n + b, n + c, n + e2);

    RicciBlocks ric = ricci(C);
    ScalarCurvature sc = scalar_curvature(ric, g, h);
    Ten4D W = weyl_dtensor(C, ric, sc.total, g, h);
    CHECK(weyl_trace_residual(W) < 1e-8);
  }
}

TEST_CASE("Bianchi residuals across spaces and connections") {
  struct Row {
    const char* f;
    double tol1, tol2;
  };
  for (const Row& row : {Row{kSphere, 1e-5, 1e-5},
                         Row{"sqrt(exp(2*x1)*y1^2+y2^2)", 1e-5, 1e-5},
                         Row{kRanders, 1e-3, 1e-3},
                         Row{"sqrt(exp(2*x1)*y1^2+(1+0.3*sin(x2))*y2^2)+0.2*y1", 1e-3,
                             1e-3}}) {
    Space s = finsler(row.f);
    Engine e(s);
    ChartPoint u = s.point({0.9, 0.4, 0.8, 0.6});
    for (auto type : {ConnectionType::Canonical, ConnectionType::Berwald,
                      ConnectionType::Christoffel}) {
      BianchiResiduals b = bianchi_residuals(e.metric_field(), e.nconn_field(), type, u);
      CHECK(b.first < row.tol1);
      CHECK(b.second < row.tol2);
    }
  }
}

TEST_CASE("covector-bundle curvature pipeline") {
  SpaceSpec spec;
  spec.cls = SpaceClass::Hamilton;
  spec.n = spec.m = 2;
  spec.fundamental =
      Expr::parse("exp(-2*x1)*p1^2+p2^2", 2, 2, FiberKind::Covector);
  Space s = Space::make(spec);
  Engine e(s);
  ChartPoint u = s.point({0.4, 0.6, 0.9, 0.7});
  PointEvaluation ev = e.evaluate(u);
  // quadratic momentum dependence: the fiber sector is flat
  for (double v : ev.curvature.Sv.a) CHECK(std::abs(v) < 1e-10);
  CHECK(std::abs(ev.scalar.vertical) < 1e-10);
  CHECK(std::abs(phi_trace(ev.phi, ev.g, ev.h)) < 1e-10);
  BianchiResiduals b =
      bianchi_residuals(e.metric_field(), e.nconn_field(), e.connection(), u);
  CHECK(b.first < 1e-5);
  CHECK(b.second < 1e-5);
}
