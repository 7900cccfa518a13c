#include "anisogeo/curvature.hpp"

#include <cmath>

namespace anisogeo {

namespace {

inline double fiber_sign(FiberKind k) { return k == FiberKind::Vector ? 1.0 : -1.0; }

}  // namespace

TorsionBlocksJ dtorsion_jets(const DConnBlocksJ& G, const MatJ& N) {
  int n = G.n, m = G.m;
  double s = fiber_sign(G.kind);
  TorsionBlocksJ T(G.kind, n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) T.Thhh(i, j, k) = G.Lh(i, j, k) - G.Lh(i, k, j);
  T.Thhv = nconn_curvature_jets(N, n, m, G.kind);
  T.Phvh = G.Ch;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int i = 0; i < n; ++i)
        T.Phvv(a, b, i) = s * N(i, a).derivative(n + b) - G.Lv(a, b, i);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) T.Svvv(a, b, c) = G.Cv(a, b, c) - G.Cv(a, c, b);
  return T;
}

TorsionBlocks values(const TorsionBlocksJ& T) {
  TorsionBlocks R(T.kind, T.n, T.m);
  auto conv = [](const Ten3<Jet>& src, Ten3D& dst) {
    for (std::size_t i = 0; i < src.a.size(); ++i) dst.a[i] = src.a[i].value();
  };
  conv(T.Thhh, R.Thhh);
  conv(T.Thhv, R.Thhv);
  conv(T.Phvh, R.Phvh);
  conv(T.Phvv, R.Phvv);
  conv(T.Svvv, R.Svvv);
  return R;
}

TorsionBlocks dtorsion(const DConnBlocksJ& G, const MatJ& N) {
  return values(dtorsion_jets(G, N));
}

CurvatureBlocks dcurvature(const DConnBlocksJ& G, const MatJ& N) {
  int n = G.n, m = G.m;
  double s = fiber_sign(G.kind);
  CurvatureBlocks C(G.kind, n, m);
  Ten3<Jet> omega = nconn_curvature_jets(N, n, m, G.kind);

  auto hd = [&](const Jet& f, int k) { return hderiv(f, N, n, m, G.kind, k).value(); };
  auto vd = [&](const Jet& f, int c) { return f.derivative(n + c).value(); };
  auto dN = [&](int a, int b, int k) { return N(k, a).derivative(n + b).value(); };

  for (int i = 0; i < n; ++i)
    for (int h = 0; h < n; ++h)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) {
          if (j == k) {
            C.Rh(i, h, j, k) = 0.0;
            continue;
          }
          double acc = hd(G.Lh(i, h, j), k) - hd(G.Lh(i, h, k), j);
          for (int mm = 0; mm < n; ++mm)
            acc += G.Lh(mm, h, j).value() * G.Lh(i, mm, k).value() -
                   G.Lh(mm, h, k).value() * G.Lh(i, mm, j).value();
          for (int a = 0; a < m; ++a)
            acc += G.Ch(i, h, a).value() * omega(a, j, k).value();
          C.Rh(i, h, j, k) = acc;
          C.Rh(i, h, k, j) = -acc;
        }

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) {
          if (j == k) {
            C.Rv(a, b, j, k) = 0.0;
            continue;
          }
          double acc = hd(G.Lv(a, b, j), k) - hd(G.Lv(a, b, k), j);
          for (int c = 0; c < m; ++c)
            acc += G.Lv(c, b, j).value() * G.Lv(a, c, k).value() -
                   G.Lv(c, b, k).value() * G.Lv(a, c, j).value();
          for (int c = 0; c < m; ++c)
            acc += G.Cv(a, b, c).value() * omega(c, j, k).value();
          C.Rv(a, b, j, k) = acc;
          C.Rv(a, b, k, j) = -acc;
        }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int c = 0; c < m; ++c) {
          double acc = vd(G.Lh(i, j, k), c) - hd(G.Ch(i, j, c), k);
          for (int mm = 0; mm < n; ++mm)
            acc += G.Lh(mm, j, k).value() * G.Ch(i, mm, c).value() -
                   G.Ch(mm, j, c).value() * G.Lh(i, mm, k).value();
          for (int b = 0; b < m; ++b)
            acc += s * dN(b, c, k) * G.Ch(i, j, b).value();
          C.Ph(i, j, k, c) = acc;
        }

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k)
        for (int c = 0; c < m; ++c) {
          double acc = vd(G.Lv(a, b, k), c) - hd(G.Cv(a, b, c), k);
          for (int d = 0; d < m; ++d)
            acc += G.Lv(d, b, k).value() * G.Cv(a, d, c).value() -
                   G.Cv(d, b, c).value() * G.Lv(a, d, k).value();
          for (int d = 0; d < m; ++d)
            acc += s * dN(d, c, k) * G.Cv(a, b, d).value();
          C.Pv(a, b, k, c) = acc;
        }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c <= b; ++c) {
          if (b == c) {
            C.Sh(i, j, b, c) = 0.0;
            continue;
          }
          double acc = vd(G.Ch(i, j, b), c) - vd(G.Ch(i, j, c), b);
          for (int h = 0; h < n; ++h)
            acc += G.Ch(h, j, b).value() * G.Ch(i, h, c).value() -
                   G.Ch(h, j, c).value() * G.Ch(i, h, b).value();
          C.Sh(i, j, b, c) = acc;
          C.Sh(i, j, c, b) = -acc;
        }

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d <= c; ++d) {
          if (c == d) {
            C.Sv(a, b, c, d) = 0.0;
            continue;
          }
          double acc = vd(G.Cv(a, b, c), d) - vd(G.Cv(a, b, d), c);
          for (int e = 0; e < m; ++e)
            acc += G.Cv(e, b, c).value() * G.Cv(a, e, d).value() -
                   G.Cv(e, b, d).value() * G.Cv(a, e, c).value();
          C.Sv(a, b, c, d) = acc;
          C.Sv(a, b, d, c) = -acc;
        }

  return C;
}

RicciBlocks ricci(const CurvatureBlocks& C) {
  int n = C.n, m = C.m;
  RicciBlocks r{MatD(n, n), MatD(n, m), MatD(m, n), MatD(m, m)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += C.Rh(k, i, j, k);
      r.hh(i, j) = acc;
    }
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc -= C.Ph(k, i, k, a);
      r.hv(i, a) = acc;
    }
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int b = 0; b < m; ++b) acc += C.Pv(b, a, i, b);
      r.vh(a, i) = acc;
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double acc = 0.0;
      for (int c = 0; c < m; ++c) acc += C.Sv(c, a, b, c);
      r.vv(a, b) = acc;
    }
  return r;
}

ScalarCurvature scalar_curvature(const RicciBlocks& ric, const MatD& g, const MatD& h) {
  MatD gi = inverse(g), hi = inverse(h);
  ScalarCurvature s;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) s.horizontal += gi(i, j) * ric.hh(i, j);
  for (int a = 0; a < h.rows; ++a)
    for (int b = 0; b < h.cols; ++b) s.vertical += hi(a, b) * ric.vv(a, b);
  s.total = s.horizontal + s.vertical;
  return s;
}

PairBlocks einstein_dtensor(const RicciBlocks& ric, const MatD& g, const MatD& h,
                            double scalar_total) {
  PairBlocks e{ric.hh, ric.hv, ric.vh, ric.vv};
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) e.hh(i, j) -= 0.5 * scalar_total * g(i, j);
  for (int a = 0; a < h.rows; ++a)
    for (int b = 0; b < h.cols; ++b) e.vv(a, b) -= 0.5 * scalar_total * h(a, b);
  return e;
}

PairBlocks phi_tensor(const RicciBlocks& ric, const MatD& g, const MatD& h,
                      double scalar_total, int n, int m) {
  double c = scalar_total / (n + m);
  PairBlocks p{ric.hh, ric.hv, ric.vh, ric.vv};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.hh(i, j) = -0.5 * (ric.hh(i, j) - c * g(i, j));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) {
      p.hv(i, a) = -0.5 * ric.hv(i, a);
      p.vh(a, i) = -0.5 * ric.vh(a, i);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) p.vv(a, b) = -0.5 * (ric.vv(a, b) - c * h(a, b));
  return p;
}

double phi_trace(const PairBlocks& phi, const MatD& g, const MatD& h) {
  MatD gi = inverse(g), hi = inverse(h);
  double t = 0.0;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) t += gi(i, j) * phi.hh(i, j);
  for (int a = 0; a < h.rows; ++a)
    for (int b = 0; b < h.cols; ++b) t += hi(a, b) * phi.vv(a, b);
  return t;
}

Ten4D curvature_full(const CurvatureBlocks& C) {
  int n = C.n, m = C.m, d = n + m;
  Ten4D R(d, d, d, d);
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < n; ++h)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) R(i, h, j, k) = C.Rh(i, h, j, k);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) R(n + a, n + b, j, k) = C.Rv(a, b, j, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int c = 0; c < m; ++c) {
          R(i, j, k, n + c) = C.Ph(i, j, k, c);
          R(i, j, n + c, k) = -C.Ph(i, j, k, c);
        }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k)
        for (int c = 0; c < m; ++c) {
          R(n + a, n + b, k, n + c) = C.Pv(a, b, k, c);
          R(n + a, n + b, n + c, k) = -C.Pv(a, b, k, c);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) R(i, j, n + b, n + c) = C.Sh(i, j, b, c);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int e = 0; e < m; ++e) R(n + a, n + b, n + c, n + e) = C.Sv(a, b, c, e);
  return R;
}

Ten3D torsion_full(const TorsionBlocks& T) {
  int n = T.n, m = T.m, d = n + m;
  Ten3D F(d, d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) F(i, j, k) = T.Thhh(i, j, k);
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) F(n + a, i, j) = T.Thhv(a, i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int b = 0; b < m; ++b) {
        F(i, j, n + b) = T.Phvh(i, j, b);
        F(i, n + b, j) = -T.Phvh(i, j, b);
      }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int i = 0; i < n; ++i) {
        F(n + a, i, n + b) = T.Phvv(a, b, i);
        F(n + a, n + b, i) = -T.Phvv(a, b, i);
      }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) F(n + a, n + b, n + c) = T.Svvv(a, b, c);
  return F;
}

Ten4D weyl_dtensor(const CurvatureBlocks& C, const RicciBlocks& ric,
                   double scalar_total, const MatD& g, const MatD& h) {
  int n = C.n, m = C.m, d = n + m;
  if (d < 3) throw DimensionError("weyl_dtensor: needs n + m >= 3");
  MatD gi = inverse(g), hi = inverse(h);
  auto ginv_full = [&](int al, int be) -> double {
    if (al < n && be < n) return gi(al, be);
    if (al >= n && be >= n) return hi(al - n, be - n);
    return 0.0;
  };
  Ten4D R = curvature_full(C);
  Ten4D A(d, d, d, d);
  for (int ga = 0; ga < d; ++ga)
    for (int de = 0; de < d; ++de)
      for (int al = 0; al < d; ++al)
        for (int be = 0; be < d; ++be) {
          double acc = 0.0;
          for (int nu = 0; nu < d; ++nu) acc += ginv_full(ga, nu) * R(de, nu, al, be);
          A(ga, de, al, be) = acc;
        }
  // mixed-position Ricci
  MatD ricfull(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ricfull(i, j) = ric.hh(i, j);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) {
      ricfull(i, n + a) = ric.hv(i, a);
      ricfull(n + a, i) = ric.vh(a, i);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) ricfull(n + a, n + b) = ric.vv(a, b);
  MatD ricmix(d, d);
  for (int ga = 0; ga < d; ++ga)
    for (int al = 0; al < d; ++al) {
      double acc = 0.0;
      for (int nu = 0; nu < d; ++nu) acc += ginv_full(ga, nu) * ricfull(nu, al);
      ricmix(ga, al) = acc;
    }
  double c1 = 4.0 / (d - 2);
  double c2 = 2.0 / (static_cast<double>(d - 1) * (d - 2));
  Ten4D W(d, d, d, d);
  auto kron = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int ga = 0; ga < d; ++ga)
    for (int de = 0; de < d; ++de)
      for (int al = 0; al < d; ++al)
        for (int be = 0; be < d; ++be) {
          double ric_term = 0.25 * (ricmix(ga, al) * kron(de, be) -
                                    ricmix(de, al) * kron(ga, be) -
                                    ricmix(ga, be) * kron(de, al) +
                                    ricmix(de, be) * kron(ga, al));
          double dd_term = 0.5 * (kron(ga, al) * kron(de, be) -
                                  kron(de, al) * kron(ga, be));
          W(ga, de, al, be) =
              A(ga, de, al, be) - c1 * ric_term + c2 * scalar_total * dd_term;
        }
  return W;
}

double weyl_trace_residual(const Ten4D& W) {
  int d = W.d0;
  double worst = 0.0;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
      for (int c = 0; c < d; ++c) {
        t1 += W(c, x, c, y);  // first upper with first lower
        t2 += W(c, x, y, c);  // first upper with second lower
        t3 += W(x, c, c, y);  // second upper with first lower
        t4 += W(x, c, y, c);  // second upper with second lower
      }
      worst = std::max({worst, std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
    }
  return worst;
}

namespace {

struct FrameGamma {
  const DConnBlocksD* G;
  int n;
  double h(int out, int in, int k) const {
    if (out < n && in < n) return G->Lh(out, in, k);
    if (out >= n && in >= n) return G->Lv(out - n, in - n, k);
    return 0.0;
  }
  double v(int out, int in, int c) const {
    if (out < n && in < n) return G->Ch(out, in, c);
    if (out >= n && in >= n) return G->Cv(out - n, in - n, c);
    return 0.0;
  }
  double dir(int out, int in, int mu) const {
    return mu < n ? h(out, in, mu) : v(out, in, mu - n);
  }
};

}  // namespace

BianchiResiduals bianchi_residuals(const MetricField& gf, const NConnectionField& Nf,
                                   ConnectionType type, const ChartPoint& u,
                                   double fd_step) {
  int n = gf.base_dim(), m = gf.fiber_dim(), d = n + m;
  FiberKind kind = gf.kind();
  double sgn = kind == FiberKind::Vector ? -1.0 : 1.0;

  MatJ Nj = Nf.eval(u, 2);
  DConnBlocksJ Gj = build_dconnection_jets(gf, Nf, type, u, 1);
  TorsionBlocksJ Tj = dtorsion_jets(Gj, Nj);
  TorsionBlocks Tv = values(Tj);
  Ten3D Tfull = torsion_full(Tv);
  CurvatureBlocks C = dcurvature(Gj, Nj);
  Ten4D Rfull = curvature_full(C);
  DConnBlocksD Gv = values(Gj);
  MatD Nv = values(Nj);
  FrameGamma fg{&Gv, n};

  // torsion components as jets in the full frame for directional derivatives
  auto torsion_jet = [&](int de, int al, int be) -> Jet {
    if (de < n) {
      if (al < n && be < n) return Tj.Thhh(de, al, be);
      if (al < n && be >= n) return Tj.Phvh(de, al, be - n);
      if (al >= n && be < n) return -Tj.Phvh(de, be, al - n);
      return Jet(d, 1, 0.0);
    }
    int a = de - n;
    if (al < n && be < n) return Tj.Thhv(a, al, be);
    if (al < n && be >= n) return Tj.Phvv(a, be - n, al);
    if (al >= n && be < n) return -Tj.Phvv(a, al - n, be);
    return Tj.Svvv(a, al - n, be - n);
  };

  // covariant derivative of the torsion: grad_mu T^de_{al be}
  Ten4D gradT(d, d, d, d);
  for (int de = 0; de < d; ++de)
    for (int al = 0; al < d; ++al)
      for (int be = 0; be < d; ++be) {
        Jet tj = torsion_jet(de, al, be);
        for (int mu = 0; mu < d; ++mu) {
          double base;
          if (mu < n) {
            base = tj.derivative(mu).value();
            for (int a = 0; a < m; ++a)
              base += sgn * Nv(mu, a) * tj.derivative(n + a).value();
          } else {
            base = tj.derivative(mu).value();
          }
          double acc = base;
          for (int nu = 0; nu < d; ++nu) {
            acc += fg.dir(de, nu, mu) * Tfull(nu, al, be);
            acc -= fg.dir(nu, al, mu) * Tfull(de, nu, be);
            acc -= fg.dir(nu, be, mu) * Tfull(de, al, nu);
          }
          gradT(de, al, be, mu) = acc;
        }
      }

  // first identity: cyclic sum over (a, b, c) of
  //   R^de_{c b a} - T^nu_{b a} T^de_{c nu} - (grad_a T)^de_{c b}
  double res1 = 0.0;
  for (int de = 0; de < d; ++de)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          double acc = 0.0;
          int xs[3] = {a, b, c};
          for (int r = 0; r < 3; ++r) {
            int aa = xs[r % 3], bb = xs[(r + 1) % 3], cc = xs[(r + 2) % 3];
            double t = Rfull(de, cc, bb, aa);
            for (int nu = 0; nu < d; ++nu) t -= Tfull(nu, bb, aa) * Tfull(de, cc, nu);
            t -= gradT(de, cc, bb, aa);
            acc += t;
          }
          res1 = std::max(res1, std::abs(acc));
        }

  // curvature derivatives by central differences of the whole pipeline
  std::vector<Ten4D> dR(d);
  for (int mu = 0; mu < d; ++mu) {
    std::vector<double> up = u.u, dn = u.u;
    up[mu] += fd_step;
    dn[mu] -= fd_step;
    ChartPoint pu(n, m, kind, up), pd(n, m, kind, dn);
    Ten4D Rp = curvature_full(
        dcurvature(build_dconnection_jets(gf, Nf, type, pu, 1), Nf.eval(pu, 2)));
    Ten4D Rm = curvature_full(
        dcurvature(build_dconnection_jets(gf, Nf, type, pd, 1), Nf.eval(pd, 2)));
    dR[mu] = Ten4D(d, d, d, d);
    for (std::size_t i = 0; i < dR[mu].a.size(); ++i)
      dR[mu].a[i] = (Rp.a[i] - Rm.a[i]) / (2.0 * fd_step);
  }
  // adapted directional derivatives of R
  std::vector<Ten4D> dirR(d, Ten4D(d, d, d, d));
  for (int mu = 0; mu < d; ++mu) {
    if (mu < n) {
      for (std::size_t i = 0; i < dirR[mu].a.size(); ++i) {
        double v = dR[mu].a[i];
        for (int a = 0; a < m; ++a) v += sgn * Nv(mu, a) * dR[n + a].a[i];
        dirR[mu].a[i] = v;
      }
    } else {
      dirR[mu] = dR[mu];
    }
  }
  auto gradR = [&](int si, int nu, int al, int be, int mu) -> double {
    double acc = dirR[mu](si, nu, al, be);
    for (int t = 0; t < d; ++t) {
      acc += fg.dir(si, t, mu) * Rfull(t, nu, al, be);
      acc -= fg.dir(t, nu, mu) * Rfull(si, t, al, be);
      acc -= fg.dir(t, al, mu) * Rfull(si, nu, t, be);
      acc -= fg.dir(t, be, mu) * Rfull(si, nu, al, t);
    }
    return acc;
  };

  // second identity: cyclic sum over (a, b, c) of
  //   (grad_a R)^si_{nu c b} + T^mu_{b a} R^si_{nu c mu}
  double res2 = 0.0;
  for (int si = 0; si < d; ++si)
    for (int nu = 0; nu < d; ++nu)
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
          for (int c = b; c < d; ++c) {
            double acc = 0.0;
            int xs[3] = {a, b, c};
            for (int r = 0; r < 3; ++r) {
              int aa = xs[r % 3], bb = xs[(r + 1) % 3], cc = xs[(r + 2) % 3];
              double t = gradR(si, nu, cc, bb, aa);
              for (int mu = 0; mu < d; ++mu)
                t += Tfull(mu, bb, aa) * Rfull(si, nu, cc, mu);
              acc += t;
            }
            res2 = std::max(res2, std::abs(acc));
          }

  return {res1, res2};
}

}  // namespace anisogeo
