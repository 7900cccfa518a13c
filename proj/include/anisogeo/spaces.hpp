#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anisogeo/connections.hpp"
#include "anisogeo/geometry.hpp"

namespace anisogeo {

enum class SpaceClass { Finsler, Lagrange, GLagrange, Cartan, Hamilton, GHamilton, Riemann };

// Which function the fiber Hessian is taken of for Lagrange spaces: the
// squared fundamental function (default) or the fundamental function itself.
enum class HessianOf { FundamentalSquared, Fundamental };

std::string to_string(SpaceClass c);

struct SpaceSpec {
  SpaceClass cls = SpaceClass::Finsler;
  int n = 0, m = 0;
  std::optional<Expr> fundamental;            // F, L, K or H
  std::vector<Expr> metric_components;        // n*n, row-major (glagrange/ghamilton/riemann)
  std::vector<Expr> n_connection;             // n*m, row-major, optional override
  HessianOf hessian_of = HessianOf::FundamentalSquared;
  ConnectionType connection = ConnectionType::Canonical;
};

// jet plumbing: all chart coordinates as jets of the given order
std::vector<Jet> coordinate_jets(const ChartPoint& u, int order);

// ---- fiber Hessian metrics ------------------------------------------------

// g_ij = (1/2) d^2 F^2 / dy^i dy^j
MatD finsler_metric(const Expr& F, const ChartPoint& u);
MatJ finsler_metric_jets(const Expr& F, const ChartPoint& u, int order);

// |F(x, lambda y) - lambda F(x, y)|
double finsler_homogeneity_residual(const Expr& F, const ChartPoint& u, double lambda);

// N^i_j = (1/2) d/dy^j [ gamma^i_{nk}(x,y) y^n y^k ], gamma the Christoffel
// symbols of the fiber Hessian metric (kept fully y-dependent)
MatD cartan_nconnection(const Expr& F, const ChartPoint& u);
MatJ cartan_nconnection_jets(const Expr& F, const ChartPoint& u, int order);

MatD lagrange_metric(const Expr& L, const ChartPoint& u,
                     HessianOf h = HessianOf::FundamentalSquared);
MatJ lagrange_metric_jets(const Expr& L, const ChartPoint& u, int order, HessianOf h);
MatD lagrange_nconnection(const Expr& L, const ChartPoint& u,
                          HessianOf h = HessianOf::FundamentalSquared);
MatJ lagrange_nconnection_jets(const Expr& L, const ChartPoint& u, int order, HessianOf h);

// contravariant fiber metric g^{ij} = (1/2) d^2 K^2 / dp_i dp_j
MatD cartan_space_metric(const Expr& K, const ChartPoint& u);
MatJ cartan_space_metric_jets(const Expr& K, const ChartPoint& u, int order);
MatD cartan_space_nconnection(const Expr& K, const ChartPoint& u);
MatJ cartan_space_nconnection_jets(const Expr& K, const ChartPoint& u, int order);

// g^{ij} = (1/2) d^2 H / dp_i dp_j
MatD hamilton_metric(const Expr& H, const ChartPoint& u);
MatJ hamilton_metric_jets(const Expr& H, const ChartPoint& u, int order);
MatD hamilton_nconnection(const Expr& H, const ChartPoint& u);
MatJ hamilton_nconnection_jets(const Expr& H, const ChartPoint& u, int order);

// ---- almost complex / almost Kaehler structures on TM ---------------------

struct DVector {
  std::vector<double> h, v;  // adapted-frame components, m = n
};

// J(delta_i) = -ddot_i, J(ddot_i) = delta_i
DVector almost_complex_apply(const DVector& x);

// theta(v1, v2) = g_ij (dy^i(v1) dx^j(v2) - dy^i(v2) dx^j(v1))
double kahler_two_form(const MatD& g, const DVector& v1, const DVector& v2);

// ---- validated space ------------------------------------------------------

class Space {
public:
  static Space make(SpaceSpec spec);

  const SpaceSpec& spec() const { return spec_; }
  SpaceClass cls() const { return spec_.cls; }
  int base_dim() const { return spec_.n; }
  int fiber_dim() const { return spec_.m; }
  FiberKind kind() const;

  // h-block of the d-metric (g_ij); always covariant
  MatJ metric_g_jets(const ChartPoint& u, int order) const;
  // v-block: h_ab for vector bundles, the contravariant fiber metric for
  // covector bundles
  MatJ metric_h_jets(const ChartPoint& u, int order) const;
  MatJ nconn_jets(const ChartPoint& u, int order) const;

  MatD metric_g(const ChartPoint& u) const { return values(metric_g_jets(u, 0)); }
  MatD metric_h(const ChartPoint& u) const { return values(metric_h_jets(u, 0)); }
  MatD nconn(const ChartPoint& u) const { return values(nconn_jets(u, 0)); }

  std::shared_ptr<NConnectionField> nconn_field() const;

  ChartPoint point(std::vector<double> coords) const;

  // max |d theta| over coordinate index triples, theta the almost symplectic
  // 2-form of the tangent-bundle d-metric; finite differences, step 1e-4
  double kahler_closedness_residual(const ChartPoint& u) const;

private:
  explicit Space(SpaceSpec spec) : spec_(std::move(spec)) {}
  SpaceSpec spec_;
};

}  // namespace anisogeo
