#include "anisogeo/spaces.hpp"

#include <cmath>

namespace anisogeo {

namespace {

constexpr double kDegenerateTol = 1e-12;

void check_nondegenerate(const MatD& g, const char* what) {
  if (std::abs(det(g)) < kDegenerateTol)
    throw SingularMatrixError(std::string(what) + ": degenerate metric block");
}

// Christoffel symbols gamma^i_{jk} of a (possibly fiber-dependent) metric
// given as jets, using plain x-partials.  Result order: one less.
Ten3<Jet> christoffel_x(const MatJ& g, int n) {
  MatJ ginv = inverse(g);
  Ten3<Jet> gamma(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet acc;
        bool first = true;
        for (int r = 0; r < n; ++r) {
          Jet term = ginv(i, r) * (g(r, k).derivative(j) + g(j, r).derivative(k) -
                                   g(j, k).derivative(r));
          if (first) {
            acc = term;
            first = false;
          } else {
            acc += term;
          }
        }
        gamma(i, j, k) = 0.5 * acc;
      }
  return gamma;
}

MatJ fiber_hessian(const Jet& f, int n, int m, double scale) {
  MatJ g(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      g(a, b) = scale * f.derivative(n + a).derivative(n + b);
  // symmetrize so stored symmetry is exact
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      Jet s = 0.5 * (g(a, b) + g(b, a));
      g(a, b) = s;
      g(b, a) = s;
    }
  return g;
}

}  // namespace

std::string to_string(SpaceClass c) {
  switch (c) {
    case SpaceClass::Finsler: return "finsler";
    case SpaceClass::Lagrange: return "lagrange";
    case SpaceClass::GLagrange: return "glagrange";
    case SpaceClass::Cartan: return "cartan";
    case SpaceClass::Hamilton: return "hamilton";
    case SpaceClass::GHamilton: return "ghamilton";
    case SpaceClass::Riemann: return "riemann";
  }
  return "?";
}

std::vector<Jet> coordinate_jets(const ChartPoint& u, int order) {
  int d = u.n + u.m;
  std::vector<Jet> coords;
  coords.reserve(d);
  for (int i = 0; i < d; ++i) coords.push_back(Jet::variable(d, order, i, u.u[i]));
  return coords;
}

MatJ finsler_metric_jets(const Expr& F, const ChartPoint& u, int order) {
  int n = u.n, m = u.m;
  auto coords = coordinate_jets(u, order + 2);
  Jet f = F.eval<Jet>(coords);
  Jet f2 = f * f;
  return fiber_hessian(f2, n, m, 0.5);
}

MatD finsler_metric(const Expr& F, const ChartPoint& u) {
  MatD g = values(finsler_metric_jets(F, u, 0));
  check_nondegenerate(g, "finsler_metric");
  return g;
}

double finsler_homogeneity_residual(const Expr& F, const ChartPoint& u, double lambda) {
  std::vector<double> scaled = u.u;
  for (int a = 0; a < u.m; ++a) scaled[u.n + a] *= lambda;
  double fs = F.eval<double>(std::span<const double>(scaled));
  double f = F.eval<double>(std::span<const double>(u.u));
  return std::abs(fs - lambda * f);
}

MatJ cartan_nconnection_jets(const Expr& F, const ChartPoint& u, int order) {
  int n = u.n, m = u.m;
  if (m != n) throw DimensionError("cartan_nconnection: needs m = n");
  auto coords = coordinate_jets(u, order + 4);
  Jet f = F.eval<Jet>(coords);
  MatJ g = fiber_hessian(f * f, n, m, 0.5);
  Ten3<Jet> gamma = christoffel_x(g, n);  // y-dependent Christoffel symbols
  // storage puts the base index first: N(j, i) = N^i_j
  MatJ N(n, n);
  for (int i = 0; i < n; ++i) {
    Jet spray;  // gamma^i_{nk} y^n y^k
    bool first = true;
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) {
        Jet term = gamma(i, a, k) * coords[n + a] * coords[n + k];
        if (first) {
          spray = term;
          first = false;
        } else {
          spray += term;
        }
      }
    for (int j = 0; j < n; ++j) N(j, i) = 0.5 * spray.derivative(n + j);
  }
  return N;
}

MatD cartan_nconnection(const Expr& F, const ChartPoint& u) {
  return values(cartan_nconnection_jets(F, u, 0));
}

MatJ lagrange_metric_jets(const Expr& L, const ChartPoint& u, int order, HessianOf h) {
  int n = u.n, m = u.m;
  auto coords = coordinate_jets(u, order + 2);
  Jet f = L.eval<Jet>(coords);
  Jet fun = h == HessianOf::FundamentalSquared ? f * f : f;
  return fiber_hessian(fun, n, m, 0.5);
}

MatD lagrange_metric(const Expr& L, const ChartPoint& u, HessianOf h) {
  MatD g = values(lagrange_metric_jets(L, u, 0, h));
  check_nondegenerate(g, "lagrange_metric");
  return g;
}

MatJ lagrange_nconnection_jets(const Expr& L, const ChartPoint& u, int order, HessianOf h) {
  int n = u.n;
  if (u.m != n) throw DimensionError("lagrange_nconnection: needs m = n");
  auto coords = coordinate_jets(u, order + 3);
  Jet f = L.eval<Jet>(coords);
  Jet fun = h == HessianOf::FundamentalSquared ? f * f : f;
  MatJ g = fiber_hessian(fun, n, n, 0.5);
  MatJ ginv = inverse(g);
  // semispray route: N^i_j = (1/4) d/dy^j [ g^{ik} ( d2 fun / dy^k dx^h y^h
  // - d fun / dx^k ) ]
  MatJ N(n, n);
  for (int i = 0; i < n; ++i) {
    Jet bracket;
    bool first = true;
    for (int k = 0; k < n; ++k) {
      Jet mixed;
      bool mfirst = true;
      for (int hidx = 0; hidx < n; ++hidx) {
        Jet t = fun.derivative(n + k).derivative(hidx) * coords[n + hidx];
        if (mfirst) {
          mixed = t;
          mfirst = false;
        } else {
          mixed += t;
        }
      }
      Jet term = ginv(i, k) * (mixed - fun.derivative(k));
      if (first) {
        bracket = term;
        first = false;
      } else {
        bracket += term;
      }
    }
    // base index first: N(j, i) = N^i_j
    for (int j = 0; j < n; ++j) N(j, i) = 0.25 * bracket.derivative(n + j);
  }
  return N;
}

MatD lagrange_nconnection(const Expr& L, const ChartPoint& u, HessianOf h) {
  return values(lagrange_nconnection_jets(L, u, 0, h));
}

MatJ cartan_space_metric_jets(const Expr& K, const ChartPoint& u, int order) {
  auto coords = coordinate_jets(u, order + 2);
  Jet f = K.eval<Jet>(coords);
  return fiber_hessian(f * f, u.n, u.m, 0.5);
}

MatD cartan_space_metric(const Expr& K, const ChartPoint& u) {
  MatD g = values(cartan_space_metric_jets(K, u, 0));
  check_nondegenerate(g, "cartan_space_metric");
  return g;
}

MatJ cartan_space_nconnection_jets(const Expr& K, const ChartPoint& u, int order) {
  int n = u.n;
  if (u.m != n) throw DimensionError("cartan_space_nconnection: needs m = n");
  auto coords = coordinate_jets(u, order + 3);
  Jet f = K.eval<Jet>(coords);
  MatJ gup = fiber_hessian(f * f, n, n, 0.5);  // contravariant
  MatJ glo = inverse(gup);
  Ten3<Jet> gamma = christoffel_x(glo, n);  // momentum-dependent symbols of g_ij
  // N_ij = gamma^k_{ij} p_k - (1/2) gamma^k_{nl} p_k p^l  d g_ij / d p_n
  std::vector<Jet> pup(n);  // p^l = g^{lk} p_k
  for (int l = 0; l < n; ++l) {
    Jet acc;
    bool first = true;
    for (int k = 0; k < n; ++k) {
      Jet t = gup(l, k) * coords[n + k];
      if (first) {
        acc = t;
        first = false;
      } else {
        acc += t;
      }
    }
    pup[l] = acc;
  }
  MatJ N(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet acc = gamma(0, i, j) * coords[n + 0];
      for (int k = 1; k < n; ++k) acc += gamma(k, i, j) * coords[n + k];
      Jet second;
      bool first = true;
      for (int nn = 0; nn < n; ++nn) {
        Jet dgi = glo(i, j).derivative(n + nn);
        Jet inner;
        bool ifirst = true;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Jet t = gamma(k, nn, l) * coords[n + k] * pup[l];
            if (ifirst) {
              inner = t;
              ifirst = false;
            } else {
              inner += t;
            }
          }
        Jet t = inner * dgi;
        if (first) {
          second = t;
          first = false;
        } else {
          second += t;
        }
      }
      N(i, j) = acc - 0.5 * second;
    }
  return N;
}

MatD cartan_space_nconnection(const Expr& K, const ChartPoint& u) {
  return values(cartan_space_nconnection_jets(K, u, 0));
}

MatJ hamilton_metric_jets(const Expr& H, const ChartPoint& u, int order) {
  auto coords = coordinate_jets(u, order + 2);
  Jet f = H.eval<Jet>(coords);
  return fiber_hessian(f, u.n, u.m, 0.5);
}

MatD hamilton_metric(const Expr& H, const ChartPoint& u) {
  MatD g = values(hamilton_metric_jets(H, u, 0));
  check_nondegenerate(g, "hamilton_metric");
  return g;
}

MatJ hamilton_nconnection_jets(const Expr& H, const ChartPoint& u, int order) {
  int n = u.n;
  if (u.m != n) throw DimensionError("hamilton_nconnection: needs m = n");
  auto coords = coordinate_jets(u, order + 3);
  Jet f = H.eval<Jet>(coords);
  MatJ gup = fiber_hessian(f, n, n, 0.5);
  MatJ glo = inverse(gup);
  // N_ij = (1/4){g_ij, H} - (1/4)(g_ik d2H/dp_k dx^j + g_jk d2H/dp_k dx^i),
  // Poisson bracket {a, b} = da/dp_k db/dx^k - db/dp_k da/dx^k
  MatJ N(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet bracket;
      bool first = true;
      for (int k = 0; k < n; ++k) {
        Jet t = glo(i, j).derivative(n + k) * f.derivative(k) -
                f.derivative(n + k) * glo(i, j).derivative(k);
        if (first) {
          bracket = t;
          first = false;
        } else {
          bracket += t;
        }
      }
      Jet mixed;
      first = true;
      for (int k = 0; k < n; ++k) {
        Jet t = glo(i, k) * f.derivative(n + k).derivative(j) +
                glo(j, k) * f.derivative(n + k).derivative(i);
        if (first) {
          mixed = t;
          first = false;
        } else {
          mixed += t;
        }
      }
      N(i, j) = 0.25 * (bracket - mixed);
    }
  return N;
}

MatD hamilton_nconnection(const Expr& H, const ChartPoint& u) {
  return values(hamilton_nconnection_jets(H, u, 0));
}

DVector almost_complex_apply(const DVector& x) {
  DVector r;
  r.h = x.v;
  r.v.resize(x.h.size());
  for (std::size_t i = 0; i < x.h.size(); ++i) r.v[i] = -x.h[i];
  return r;
}

double kahler_two_form(const MatD& g, const DVector& v1, const DVector& v2) {
  double acc = 0.0;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j)
      acc += g(i, j) * (v1.v[i] * v2.h[j] - v2.v[i] * v1.h[j]);
  return acc;
}

// ---- Space ----------------------------------------------------------------

FiberKind Space::kind() const {
  switch (spec_.cls) {
    case SpaceClass::Cartan:
    case SpaceClass::Hamilton:
    case SpaceClass::GHamilton:
      return FiberKind::Covector;
    default:
      return FiberKind::Vector;
  }
}

Space Space::make(SpaceSpec spec) {
  if (spec.n < 1 || spec.m < 1) throw DimensionError("Space: dims must be >= 1");
  if (spec.m != spec.n)
    throw DimensionError("Space: tangent/cotangent classes require m = n");
  bool wants_fundamental = spec.cls == SpaceClass::Finsler ||
                           spec.cls == SpaceClass::Lagrange ||
                           spec.cls == SpaceClass::Cartan ||
                           spec.cls == SpaceClass::Hamilton;
  if (wants_fundamental) {
    if (!spec.fundamental || !spec.metric_components.empty())
      throw DimensionError("Space: this class takes exactly a fundamental function");
  } else {
    if (spec.fundamental ||
        static_cast<int>(spec.metric_components.size()) != spec.n * spec.n)
      throw DimensionError("Space: this class takes n*n metric components");
  }
  if ((spec.cls == SpaceClass::GLagrange || spec.cls == SpaceClass::GHamilton) &&
      spec.n_connection.empty())
    throw DimensionError("Space: generalized classes need an explicit n_connection");
  if (!spec.n_connection.empty() &&
      static_cast<int>(spec.n_connection.size()) != spec.n * spec.m)
    throw DimensionError("Space: n_connection needs n*m entries");
  return Space(std::move(spec));
}

ChartPoint Space::point(std::vector<double> coords) const {
  return ChartPoint(spec_.n, spec_.m, kind(), std::move(coords));
}

MatJ Space::metric_g_jets(const ChartPoint& u, int order) const {
  switch (spec_.cls) {
    case SpaceClass::Finsler:
      return finsler_metric_jets(*spec_.fundamental, u, order);
    case SpaceClass::Lagrange:
      return lagrange_metric_jets(*spec_.fundamental, u, order, spec_.hessian_of);
    case SpaceClass::Cartan: {
      // covariant h-block: inverse of the contravariant fiber Hessian
      return inverse(cartan_space_metric_jets(*spec_.fundamental, u, order));
    }
    case SpaceClass::Hamilton:
      return inverse(hamilton_metric_jets(*spec_.fundamental, u, order));
    case SpaceClass::GHamilton: {
      auto coords = coordinate_jets(u, order);
      int n = spec_.n;
      MatJ gup(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          gup(i, j) = spec_.metric_components[static_cast<std::size_t>(i) * n + j]
                          .eval<Jet>(coords);
      return inverse(gup);
    }
    default: {  // GLagrange, Riemann
      auto coords = coordinate_jets(u, order);
      int n = spec_.n;
      MatJ g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          g(i, j) = spec_.metric_components[static_cast<std::size_t>(i) * n + j]
                        .eval<Jet>(coords);
      return g;
    }
  }
}

MatJ Space::metric_h_jets(const ChartPoint& u, int order) const {
  switch (spec_.cls) {
    case SpaceClass::Cartan:
      return cartan_space_metric_jets(*spec_.fundamental, u, order);
    case SpaceClass::Hamilton:
      return hamilton_metric_jets(*spec_.fundamental, u, order);
    case SpaceClass::GHamilton: {
      auto coords = coordinate_jets(u, order);
      int n = spec_.n;
      MatJ gup(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          gup(i, j) = spec_.metric_components[static_cast<std::size_t>(i) * n + j]
                          .eval<Jet>(coords);
      return gup;
    }
    default:
      // tangent-bundle classes identify the two blocks
      return metric_g_jets(u, order);
  }
}

MatJ Space::nconn_jets(const ChartPoint& u, int order) const {
  if (!spec_.n_connection.empty()) {
    ExprNConnection N(spec_.n, spec_.m, kind(), spec_.n_connection);
    return N.eval(u, order);
  }
  switch (spec_.cls) {
    case SpaceClass::Finsler:
      return cartan_nconnection_jets(*spec_.fundamental, u, order);
    case SpaceClass::Lagrange:
      return lagrange_nconnection_jets(*spec_.fundamental, u, order, spec_.hessian_of);
    case SpaceClass::Cartan:
      return cartan_space_nconnection_jets(*spec_.fundamental, u, order);
    case SpaceClass::Hamilton:
      return hamilton_nconnection_jets(*spec_.fundamental, u, order);
    case SpaceClass::Riemann: {
      // quadratic lift: N^i_j = gamma^i_{jk}(x) y^k
      int n = spec_.n;
      auto coords = coordinate_jets(u, order + 1);
      MatJ a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          a(i, j) = spec_.metric_components[static_cast<std::size_t>(i) * n + j]
                        .eval<Jet>(coords);
      Ten3<Jet> gamma = christoffel_x(a, n);
      // N(j, i) = N^i_j = gamma^i_{jk} y^k, base index stored first
      MatJ N(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet acc = gamma(i, j, 0) * coords[n + 0];
          for (int k = 1; k < n; ++k) acc += gamma(i, j, k) * coords[n + k];
          N(j, i) = acc;
        }
      return N;
    }
    default:
      throw DimensionError("Space: no canonical N-connection for this class");
  }
}

std::shared_ptr<NConnectionField> Space::nconn_field() const {
  Space copy = *this;
  return std::make_shared<FunctionNConnection>(
      spec_.n, spec_.m, kind(),
      [copy](const ChartPoint& u, int order) { return copy.nconn_jets(u, order); });
}

double Space::kahler_closedness_residual(const ChartPoint& u) const {
  if (kind() != FiberKind::Vector)
    throw DimensionError("kahler_closedness_residual: tangent-bundle classes only");
  int n = spec_.n, d = 2 * n;
  const double step = 1e-4;
  // coordinate components of theta = g_ij delta y^i wedge dx^j
  auto theta = [&](const std::vector<double>& coords) {
    ChartPoint p(n, n, FiberKind::Vector, coords);
    MatD g = values(metric_g_jets(p, 0));
    MatD N = values(nconn_jets(p, 0));
    MatD th(d, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        th(n + i, j) = g(i, j);
        th(j, n + i) = -g(i, j);
      }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += g(i, b) * N(a, i) - g(i, a) * N(b, i);
        th(a, b) = acc;
      }
    return th;
  };
  std::vector<MatD> dth(d, MatD(d, d));
  for (int mu = 0; mu < d; ++mu) {
    std::vector<double> up = u.u, dn = u.u;
    up[mu] += step;
    dn[mu] -= step;
    MatD tu = theta(up), td = theta(dn);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dth[mu](i, j) = (tu(i, j) - td(i, j)) / (2 * step);
  }
  double worst = 0.0;
  for (int mu = 0; mu < d; ++mu)
    for (int nu = mu + 1; nu < d; ++nu)
      for (int rho = nu + 1; rho < d; ++rho) {
        double v = dth[mu](nu, rho) + dth[nu](rho, mu) + dth[rho](mu, nu);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

}  // namespace anisogeo
