#include "anisogeo/connections.hpp"

#include <cmath>

namespace anisogeo {

namespace {

// symmetric Christoffel pattern in the h-block with N-elongated derivatives
Ten3<Jet> lh_block(const MatJ& g, const MatJ& N, int n, int m, FiberKind kind) {
  MatJ ginv = inverse(g);
  Ten3<Jet> L(n, n, n);
  Ten3<Jet> dg(n, n, n);  // dg(j, r, k) = delta_k g_jr
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k) dg(j, r, k) = hderiv(g(j, r), N, n, m, kind, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet acc;
        bool first = true;
        for (int r = 0; r < n; ++r) {
          Jet t = ginv(i, r) * (dg(j, r, k) + dg(k, r, j) - dg(j, k, r));
          if (first) {
            acc = t;
            first = false;
          } else {
            acc += t;
          }
        }
        L(i, j, k) = 0.5 * acc;
      }
  return L;
}

// fiber-block Christoffel pattern from plain fiber derivatives; for covector
// bundles `h` is contravariant and the same pattern applies with the inverse
// in front and the index placement carried by the storage convention
Ten3<Jet> cv_block(const MatJ& h, int n, int m) {
  MatJ hinv = inverse(h);
  Ten3<Jet> C(m, m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        Jet acc;
        bool first = true;
        for (int d = 0; d < m; ++d) {
          Jet t = hinv(a, d) * (h(b, d).derivative(n + c) + h(c, d).derivative(n + b) -
                                h(b, c).derivative(n + d));
          if (first) {
            acc = t;
            first = false;
          } else {
            acc += t;
          }
        }
        C(a, b, c) = 0.5 * acc;
      }
  return C;
}

Jet zero_like(const Jet& proto) { return Jet(proto.nvars(), proto.order(), 0.0); }

}  // namespace

DConnBlocksJ christoffel_dsymbols_jets(const MatJ& g, const MatJ& h, const MatJ& N,
                                       int n, int m, FiberKind kind) {
  DConnBlocksJ G(kind, n, m);
  G.Lh = lh_block(g, N, n, m, kind);
  G.Cv = cv_block(h, n, m);
  Jet z = zero_like(g(0, 0));
  for (auto& e : G.Lv.a) e = z;
  for (auto& e : G.Ch.a) e = z;
  return G;
}

DConnBlocksJ berwald_dconnection_jets(const MatJ& g, const MatJ& h, const MatJ& N,
                                      int n, int m, FiberKind kind) {
  DConnBlocksJ G(kind, n, m);
  G.Lh = lh_block(g, N, n, m, kind);
  G.Cv = cv_block(h, n, m);
  double s = kind == FiberKind::Vector ? 1.0 : -1.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k) G.Lv(a, b, k) = s * N(k, a).derivative(n + b);
  Jet z = zero_like(g(0, 0));
  for (auto& e : G.Ch.a) e = z;
  return G;
}

DConnBlocksJ canonical_dconnection_jets(const MatJ& g, const MatJ& h, const MatJ& N,
                                        int n, int m, FiberKind kind) {
  DConnBlocksJ G(kind, n, m);
  G.Lh = lh_block(g, N, n, m, kind);
  G.Cv = cv_block(h, n, m);
  MatJ ginv = inverse(g);
  MatJ hinv = inverse(h);
  double s = kind == FiberKind::Vector ? 1.0 : -1.0;

  // dN(a, b, k) = fiber derivative of N_k^a (resp. N_{ka}) in slot b
  Ten3<Jet> dN(m, m, n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k) dN(a, b, k) = N(k, a).derivative(n + b);

  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < n; ++k) {
        Jet corr;
        bool first = true;
        for (int c = 0; c < m; ++c) {
          Jet inner = hderiv(h(b, c), N, n, m, kind, k);
          for (int d = 0; d < m; ++d)
            inner -= s * (dN(d, b, k) * h(d, c) + dN(d, c, k) * h(d, b));
          Jet t = hinv(a, c) * inner;
          if (first) {
            corr = t;
            first = false;
          } else {
            corr += t;
          }
        }
        G.Lv(a, b, k) = s * dN(a, b, k) + 0.5 * corr;
      }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < m; ++c) {
        Jet acc;
        bool first = true;
        for (int k = 0; k < n; ++k) {
          Jet t = ginv(i, k) * g(j, k).derivative(n + c);
          if (first) {
            acc = t;
            first = false;
          } else {
            acc += t;
          }
        }
        G.Ch(i, j, c) = 0.5 * acc;
      }
  return G;
}

DConnBlocksD values(const DConnBlocksJ& G) {
  DConnBlocksD R(G.kind, G.n, G.m);
  for (std::size_t i = 0; i < G.Lh.a.size(); ++i) R.Lh.a[i] = G.Lh.a[i].value();
  for (std::size_t i = 0; i < G.Lv.a.size(); ++i) R.Lv.a[i] = G.Lv.a[i].value();
  for (std::size_t i = 0; i < G.Ch.a.size(); ++i) R.Ch.a[i] = G.Ch.a[i].value();
  for (std::size_t i = 0; i < G.Cv.a.size(); ++i) R.Cv.a[i] = G.Cv.a[i].value();
  return R;
}

namespace {

enum class ConnLabel { Christoffel, Berwald, Canonical };

DConnBlocksJ build_conn(const MetricField& gf, const NConnectionField& Nf,
                        const ChartPoint& u, int order, ConnLabel label) {
  if (gf.kind() != Nf.kind() || gf.kind() != u.kind)
    throw DimensionError("d-connection: fiber kind mismatch");
  int n = gf.base_dim(), m = gf.fiber_dim();
  MatJ g = gf.g(u, order + 1);
  MatJ h = gf.h(u, order + 1);
  MatJ N = Nf.eval(u, order + 1);
  switch (label) {
    case ConnLabel::Christoffel:
      return christoffel_dsymbols_jets(g, h, N, n, m, gf.kind());
    case ConnLabel::Berwald:
      return berwald_dconnection_jets(g, h, N, n, m, gf.kind());
    default:
      return canonical_dconnection_jets(g, h, N, n, m, gf.kind());
  }
}

}  // namespace

DConnBlocksJ build_dconnection_jets(const MetricField& g, const NConnectionField& N,
                                    ConnectionType type, const ChartPoint& u, int order) {
  switch (type) {
    case ConnectionType::Christoffel:
      return build_conn(g, N, u, order, ConnLabel::Christoffel);
    case ConnectionType::Berwald:
      return build_conn(g, N, u, order, ConnLabel::Berwald);
    default:
      return build_conn(g, N, u, order, ConnLabel::Canonical);
  }
}

DConnBlocksD christoffel_dsymbols(const MetricField& g, const NConnectionField& N,
                                  const ChartPoint& u) {
  return values(build_conn(g, N, u, 0, ConnLabel::Christoffel));
}

DConnBlocksD berwald_dconnection(const MetricField& g, const NConnectionField& N,
                                 const ChartPoint& u) {
  return values(build_conn(g, N, u, 0, ConnLabel::Berwald));
}

DConnBlocksD canonical_dconnection(const MetricField& g, const NConnectionField& N,
                                   const ChartPoint& u) {
  return values(build_conn(g, N, u, 0, ConnLabel::Canonical));
}

DConnBlocksD deformation_tensor(const DConnBlocksD& G1, const DConnBlocksD& G2) {
  if (G1.kind != G2.kind || G1.n != G2.n || G1.m != G2.m)
    throw DimensionError("deformation_tensor: shape or kind mismatch");
  DConnBlocksD P(G1.kind, G1.n, G1.m);
  for (std::size_t i = 0; i < P.Lh.a.size(); ++i) P.Lh.a[i] = G1.Lh.a[i] - G2.Lh.a[i];
  for (std::size_t i = 0; i < P.Lv.a.size(); ++i) P.Lv.a[i] = G1.Lv.a[i] - G2.Lv.a[i];
  for (std::size_t i = 0; i < P.Ch.a.size(); ++i) P.Ch.a[i] = G1.Ch.a[i] - G2.Ch.a[i];
  for (std::size_t i = 0; i < P.Cv.a.size(); ++i) P.Cv.a[i] = G1.Cv.a[i] - G2.Cv.a[i];
  return P;
}

DCovariantDerivative dcovariant_derivative(const DConnBlocksD& G, const MatD& Nvals,
                                           const DTensorField& T, const ChartPoint& u) {
  const DTensorShape& sh = T.shape;
  int n = sh.n, m = sh.m;
  int nslots = static_cast<int>(sh.slots.size());
  std::vector<Jet> comps = T.eval(u, 1);
  std::size_t size = sh.size();
  if (comps.size() != size)
    throw DimensionError("dcovariant_derivative: component count mismatch");

  std::vector<std::size_t> stride(nslots, 1);
  for (int s = nslots - 2; s >= 0; --s) stride[s] = stride[s + 1] * sh.dim(s + 1);

  DCovariantDerivative out;
  out.h.assign(size * n, 0.0);
  out.v.assign(size * m, 0.0);

  std::vector<int> idx(nslots, 0);
  for (std::size_t flat = 0; flat < size; ++flat) {
    // decode the multi-index
    std::size_t rem = flat;
    for (int s = 0; s < nslots; ++s) {
      idx[s] = static_cast<int>(rem / stride[s]);
      rem %= stride[s];
    }
    const Jet& f = comps[flat];
    for (int k = 0; k < n; ++k) {
      double base = f.derivative(k).value();
      double sgn = T.kind == FiberKind::Vector ? -1.0 : 1.0;
      for (int a = 0; a < m; ++a)
        base += sgn * Nvals(k, a) * f.derivative(n + a).value();
      double acc = base;
      for (int s = 0; s < nslots; ++s) {
        SlotType st = sh.slots[s];
        int dim = sh.dim(s);
        bool hblock = st == SlotType::HVec || st == SlotType::HForm;
        const Ten3D& B = hblock ? G.Lh : G.Lv;
        bool vec = st == SlotType::HVec || st == SlotType::VVec;
        std::size_t base_flat = flat - static_cast<std::size_t>(idx[s]) * stride[s];
        for (int r = 0; r < dim; ++r) {
          std::size_t other = base_flat + static_cast<std::size_t>(r) * stride[s];
          double tv = comps[other].value();
          if (vec)
            acc += B(idx[s], r, k) * tv;
          else
            acc -= B(r, idx[s], k) * tv;
        }
      }
      out.h[flat * n + k] = acc;
    }
    for (int c = 0; c < m; ++c) {
      double acc = f.derivative(n + c).value();
      for (int s = 0; s < nslots; ++s) {
        SlotType st = sh.slots[s];
        int dim = sh.dim(s);
        bool hblock = st == SlotType::HVec || st == SlotType::HForm;
        const Ten3D& B = hblock ? G.Ch : G.Cv;
        bool vec = st == SlotType::HVec || st == SlotType::VVec;
        std::size_t base_flat = flat - static_cast<std::size_t>(idx[s]) * stride[s];
        for (int r = 0; r < dim; ++r) {
          std::size_t other = base_flat + static_cast<std::size_t>(r) * stride[s];
          double tv = comps[other].value();
          if (vec)
            acc += B(idx[s], r, c) * tv;
          else
            acc -= B(r, idx[s], c) * tv;
        }
      }
      out.v[flat * m + c] = acc;
    }
  }
  return out;
}

MetricityResiduals metricity_residuals(const MetricField& gf, const NConnectionField& Nf,
                                       const DConnBlocksD& G, const ChartPoint& u) {
  int n = gf.base_dim(), m = gf.fiber_dim();
  MatD Nvals = Nf.values(u);

  DTensorField gT;
  gT.kind = gf.kind();
  gT.shape = {n, m, {SlotType::HForm, SlotType::HForm}};
  gT.eval = [&gf](const ChartPoint& p, int order) {
    MatJ g = gf.g(p, order);
    return g.a;
  };
  // fiber block: both kinds sit on coframe slots (h_ab on delta y^a delta y^b,
  // the contravariant block on delta p_a delta p_b)
  DTensorField hT;
  hT.kind = gf.kind();
  hT.shape = {n, m, {SlotType::VForm, SlotType::VForm}};
  hT.eval = [&gf](const ChartPoint& p, int order) {
    MatJ h = gf.h(p, order);
    return h.a;
  };

  DCovariantDerivative Dg = dcovariant_derivative(G, Nvals, gT, u);
  DCovariantDerivative Dh = dcovariant_derivative(G, Nvals, hT, u);

  MetricityResiduals r;
  for (double v : Dg.h) r.hg = std::max(r.hg, std::abs(v));
  for (double v : Dg.v) r.vg = std::max(r.vg, std::abs(v));
  for (double v : Dh.h) r.hh = std::max(r.hh, std::abs(v));
  for (double v : Dh.v) r.vh = std::max(r.vh, std::abs(v));
  return r;
}

}  // namespace anisogeo
