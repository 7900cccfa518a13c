#include "anisogeo/geometry.hpp"

#include <cmath>

namespace anisogeo {

ChartPoint::ChartPoint(int n_, int m_, FiberKind k, std::vector<double> coords)
    : n(n_), m(m_), kind(k), u(std::move(coords)) {
  if (static_cast<int>(u.size()) != n + m)
    throw DimensionError("ChartPoint: coordinate count does not match n + m");
  for (double v : u)
    if (!std::isfinite(v)) throw DimensionError("ChartPoint: non-finite coordinate");
}

MatJ ZeroNConnection::eval(const ChartPoint& u, int order) const {
  (void)u;
  MatJ N(base_dim(), fiber_dim());
  for (auto& e : N.a) e = Jet(base_dim() + fiber_dim(), order, 0.0);
  return N;
}

ExprNConnection::ExprNConnection(int n, int m, FiberKind kind, std::vector<Expr> entries)
    : NConnectionField(n, m, kind), entries_(std::move(entries)) {
  if (static_cast<int>(entries_.size()) != n * m)
    throw DimensionError("ExprNConnection: need n*m entries");
}

MatJ ExprNConnection::eval(const ChartPoint& u, int order) const {
  int n = base_dim(), m = fiber_dim(), d = n + m;
  std::vector<Jet> coords;
  coords.reserve(d);
  for (int i = 0; i < d; ++i) coords.push_back(Jet::variable(d, order, i, u.u[i]));
  MatJ N(n, m);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a)
      N(i, a) = entries_[static_cast<std::size_t>(i) * m + a].eval<Jet>(coords);
  return N;
}

AdaptedFrame adapted_frame(const MatD& N, int n, int m, FiberKind kind) {
  if (N.rows != n || N.cols != m)
    throw DimensionError("adapted_frame: N must be n x m");
  int d = n + m;
  AdaptedFrame f{MatD(d, d), MatD(d, d)};
  for (int i = 0; i < d; ++i) {
    f.D(i, i) = 1.0;
    f.C(i, i) = 1.0;
  }
  double s = kind == FiberKind::Vector ? 1.0 : -1.0;
  // vector fiber:   delta_i = d_i - N_i^a d_a,  delta y^a = dy^a + N_i^a dx^i
  // covector fiber: elongation signs are inverted
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) {
      f.D(n + a, i) = -s * N(i, a);
      f.C(n + a, i) = s * N(i, a);
    }
  return f;
}

AdaptedFrame adapted_frame(const NConnectionField& N, const ChartPoint& u) {
  if (N.kind() != u.kind)
    throw DimensionError("adapted_frame: fiber kind mismatch");
  return adapted_frame(N.values(u), N.base_dim(), N.fiber_dim(), N.kind());
}

Jet hderiv(const Jet& f, const MatJ& N, int n, int m, FiberKind kind, int k) {
  Jet r = f.derivative(k);
  double s = kind == FiberKind::Vector ? -1.0 : 1.0;
  for (int a = 0; a < m; ++a) r += s * N(k, a) * f.derivative(n + a);
  return r;
}

Ten3D anholonomy_coefficients(const NConnectionField& N, const ChartPoint& u) {
  // generic route: frame vector fields X_beta as jet-valued coordinate
  // components, commutator [X_beta, X_gamma]^mu = X_beta^nu d_nu X_gamma^mu -
  // X_gamma^nu d_nu X_beta^mu, then w = C . commutator
  int n = N.base_dim(), m = N.fiber_dim(), d = n + m;
  MatJ Nj = N.eval(u, 1);
  double s = N.kind() == FiberKind::Vector ? 1.0 : -1.0;
  // frame component jets: X[beta][mu]
  std::vector<std::vector<Jet>> X(d, std::vector<Jet>(d, Jet(d, 1, 0.0)));
  for (int b = 0; b < d; ++b) X[b][b] = Jet(d, 1, 1.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) X[i][n + a] = -s * Nj(i, a);

  AdaptedFrame f = adapted_frame(anisogeo::values(Nj), n, m, N.kind());
  Ten3D w(d, d, d);
  for (int b = 0; b < d; ++b)
    for (int g = 0; g < d; ++g) {
      if (b == g) continue;
      std::vector<double> comm(d, 0.0);
      for (int mu = 0; mu < d; ++mu) {
        double acc = 0.0;
        for (int nu = 0; nu < d; ++nu) {
          acc += X[b][nu].value() * X[g][mu].derivative(nu).value();
          acc -= X[g][nu].value() * X[b][mu].derivative(nu).value();
        }
        comm[mu] = acc;
      }
      for (int al = 0; al < d; ++al) {
        double acc = 0.0;
        for (int mu = 0; mu < d; ++mu) acc += f.C(al, mu) * comm[mu];
        w(al, b, g) = acc;
      }
    }
  return w;
}

Ten3<Jet> nconn_curvature_jets(const MatJ& N, int n, int m, FiberKind kind) {
  Ten3<Jet> omega(m, n, n);
  // B[a][i][j] = delta_j N_i^a (vector) / delta_j N_{ia} (covector)
  auto B = [&](int a, int i, int j) { return hderiv(N(i, a), N, n, m, kind, j); };
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if (i == j) {
          omega(a, i, j) = Jet(n + m, std::max(0, N(0, 0).order() - 1), 0.0);
          continue;
        }
        Jet v = kind == FiberKind::Vector ? B(a, i, j) - B(a, j, i)
                                          : B(a, j, i) - B(a, i, j);
        omega(a, i, j) = v;
        omega(a, j, i) = -v;
      }
  return omega;
}

Ten3D nconn_curvature(const NConnectionField& N, const ChartPoint& u) {
  MatJ Nj = N.eval(u, 1);
  Ten3<Jet> oj = nconn_curvature_jets(Nj, N.base_dim(), N.fiber_dim(), N.kind());
  Ten3D o(oj.d0, oj.d1, oj.d2);
  for (std::size_t i = 0; i < o.a.size(); ++i) o.a[i] = oj.a[i].value();
  return o;
}

MatD nconn_from_metric(const MatD& G, int n, int m) {
  if (G.rows != n + m || G.cols != n + m)
    throw DimensionError("nconn_from_metric: G must be (n+m) square");
  MatD h(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) h(a, b) = G(n + a, n + b);
  MatD hinv = inverse(h);
  MatD N(n, m);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < m; ++b) {
      double acc = 0.0;
      for (int a = 0; a < m; ++a) acc += hinv(a, b) * G(i, n + a);
      N(i, b) = acc;
    }
  return N;
}

std::pair<MatD, MatD> osc2_dual_coefficients(const MatD& N1, const MatD& N2) {
  if (N1.rows != N1.cols || N2.rows != N2.cols || N1.rows != N2.rows)
    throw DimensionError("osc2_dual_coefficients: need equal square matrices");
  MatD M1 = N1;
  MatD M2 = matmul(N1, N1);
  for (int i = 0; i < N2.rows; ++i)
    for (int j = 0; j < N2.cols; ++j) M2(i, j) += N2(i, j);
  return {M1, M2};
}

std::pair<MatD, MatD> osc2_frame_matrices(const MatD& N1, const MatD& N2) {
  auto [M1, M2] = osc2_dual_coefficients(N1, N2);
  int n = N1.rows;
  MatD Nhat(3 * n, 3 * n), Mhat(3 * n, 3 * n);
  auto put = [n](MatD& T, int bi, int bj, const MatD& B, double s) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(bi * n + i, bj * n + j) = s * B(i, j);
  };
  MatD I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  put(Nhat, 0, 0, I, 1.0);
  put(Nhat, 1, 1, I, 1.0);
  put(Nhat, 2, 2, I, 1.0);
  put(Nhat, 0, 1, N1, -1.0);
  put(Nhat, 0, 2, N2, -1.0);
  put(Nhat, 1, 2, N1, -1.0);
  put(Mhat, 0, 0, I, 1.0);
  put(Mhat, 1, 1, I, 1.0);
  put(Mhat, 2, 2, I, 1.0);
  put(Mhat, 0, 1, M1, 1.0);
  put(Mhat, 0, 2, M2, 1.0);
  put(Mhat, 1, 2, M1, 1.0);
  return {Nhat, Mhat};
}

std::vector<double> symmetric_eigenvalues(MatD A) {
  int n = A.rows;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = A(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace anisogeo
