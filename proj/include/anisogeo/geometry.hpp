#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "anisogeo/expr.hpp"
#include "anisogeo/linalg.hpp"

namespace anisogeo {

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point on the total space: n base coordinates followed by m fiber
// coordinates (y for vector bundles, p for covector bundles).
struct ChartPoint {
  int n = 0, m = 0;
  FiberKind kind = FiberKind::Vector;
  std::vector<double> u;  // length n + m

  ChartPoint() = default;
  ChartPoint(int n_, int m_, FiberKind k, std::vector<double> coords);
  double x(int i) const { return u[i]; }          // 0-based
  double fiber(int a) const { return u[n + a]; }  // 0-based
};

// Field of N-connection coefficients N_i^a(x,y) (or the covector-bundle
// counterpart with coefficients carrying a lower fiber index).  eval()
// returns the n x m coefficient matrix as jets with all partials up to
// `order` at the given point.
class NConnectionField {
public:
  NConnectionField(int n, int m, FiberKind kind) : n_(n), m_(m), kind_(kind) {}
  virtual ~NConnectionField() = default;
  int base_dim() const { return n_; }
  int fiber_dim() const { return m_; }
  FiberKind kind() const { return kind_; }
  virtual MatJ eval(const ChartPoint& u, int order) const = 0;
  MatD values(const ChartPoint& u) const { return anisogeo::values(eval(u, 0)); }

private:
  int n_, m_;
  FiberKind kind_;
};

class ZeroNConnection : public NConnectionField {
public:
  using NConnectionField::NConnectionField;
  MatJ eval(const ChartPoint& u, int order) const override;
};

// coefficients given by parsed expressions, one per (i, a)
class ExprNConnection : public NConnectionField {
public:
  ExprNConnection(int n, int m, FiberKind kind, std::vector<Expr> entries);
  MatJ eval(const ChartPoint& u, int order) const override;

private:
  std::vector<Expr> entries_;  // row-major n x m
};

class FunctionNConnection : public NConnectionField {
public:
  using Fn = std::function<MatJ(const ChartPoint&, int)>;
  FunctionNConnection(int n, int m, FiberKind kind, Fn fn)
      : NConnectionField(n, m, kind), fn_(std::move(fn)) {}
  MatJ eval(const ChartPoint& u, int order) const override { return fn_(u, order); }

private:
  Fn fn_;
};

// Adapted frame and coframe at a point.  Columns of D are the frame vectors
// expressed in the coordinate basis; rows of C are the coframe elements
// expressed in the coordinate differentials, so that C * D = identity.
struct AdaptedFrame {
  MatD D, C;
};

AdaptedFrame adapted_frame(const MatD& N, int n, int m, FiberKind kind);
AdaptedFrame adapted_frame(const NConnectionField& N, const ChartPoint& u);

// Anholonomy coefficients w^alpha_{beta gamma} of the adapted frame,
// [delta_beta, delta_gamma] = w^alpha_{beta gamma} delta_alpha, computed from
// commutators of the frame vector fields.  Index order: (alpha, beta, gamma).
Ten3D anholonomy_coefficients(const NConnectionField& N, const ChartPoint& u);

// Curvature of the N-connection.  Vector bundles: Omega^a_{ij} stored as
// (a, i, j).  Covector bundles: Omega_{ij a} = delta_i N_{ja} - delta_j N_{ia},
// stored with the same (a, i, j) layout.  Antisymmetric in (i, j) exactly.
Ten3D nconn_curvature(const NConnectionField& N, const ChartPoint& u);
Ten3<Jet> nconn_curvature_jets(const MatJ& N, int n, int m, FiberKind kind);

// N compatible with a full coordinate-frame metric G: N_i^b = h^{ab} G_{ia}
// with h the lower-right fiber block.  The returned N block-diagonalizes G
// in the adapted coframe.
MatD nconn_from_metric(const MatD& G, int n, int m);

// Second-order osculator frame machinery: dual coefficients
// M1 = N1, M2 = N2 + N1*N1, and the frame/coframe block matrices whose
// product is the identity.
std::pair<MatD, MatD> osc2_dual_coefficients(const MatD& N1, const MatD& N2);
std::pair<MatD, MatD> osc2_frame_matrices(const MatD& N1, const MatD& N2);

// adapted directional derivatives of a jet-valued field
Jet hderiv(const Jet& f, const MatJ& N, int n, int m, FiberKind kind, int k);
inline Jet vderiv(const Jet& f, int n, int a) { return f.derivative(n + a); }

}  // namespace anisogeo
