#pragma once

#include "anisogeo/connections.hpp"

namespace anisogeo {

// The five torsion blocks of a d-connection.  Antisymmetry of Thhh, Thhv
// and Svvv in their last index pair is enforced by assembly.
template <class T>
struct TorsionBlocksT {
  FiberKind kind = FiberKind::Vector;
  int n = 0, m = 0;
  Ten3<T> Thhh;  // T^i_{jk}        (i, j, k)
  Ten3<T> Thhv;  // T^a_{ij}        (a, i, j), equals the N-connection curvature
  Ten3<T> Phvh;  // P^i_{jb}        (i, j, b)
  Ten3<T> Phvv;  // P^a_{bi}        (a, b, i)
  Ten3<T> Svvv;  // S^a_{bc}        (a, b, c)

  TorsionBlocksT() = default;
  TorsionBlocksT(FiberKind k, int n_, int m_)
      : kind(k), n(n_), m(m_), Thhh(n_, n_, n_), Thhv(m_, n_, n_), Phvh(n_, n_, m_),
        Phvv(m_, m_, n_), Svvv(m_, m_, m_) {}
};

using TorsionBlocks = TorsionBlocksT<double>;
using TorsionBlocksJ = TorsionBlocksT<Jet>;

// The six curvature blocks; the last two indices are the plane of rotation
// and the blocks are antisymmetric in them where both have like type.
struct CurvatureBlocks {
  FiberKind kind = FiberKind::Vector;
  int n = 0, m = 0;
  Ten4D Rh;  // R^{.i}_{h.jk}  (i, h, j, k)
  Ten4D Rv;  // R^{.a}_{b.jk}  (a, b, j, k)
  Ten4D Ph;  // P^{.i}_{j.kc}  (i, j, k, c)
  Ten4D Pv;  // P^{.a}_{b.kc}  (a, b, k, c)
  Ten4D Sh;  // S^{.i}_{j.bc}  (i, j, b, c)
  Ten4D Sv;  // S^{.a}_{b.cd}  (a, b, c, d)

  CurvatureBlocks() = default;
  CurvatureBlocks(FiberKind k, int n_, int m_)
      : kind(k), n(n_), m(m_), Rh(n_, n_, n_, n_), Rv(m_, m_, n_, n_),
        Ph(n_, n_, n_, m_), Pv(m_, m_, n_, m_), Sh(n_, n_, m_, m_),
        Sv(m_, m_, m_, m_) {}
};

// Gamma and N must carry jets of order >= 1.
TorsionBlocksJ dtorsion_jets(const DConnBlocksJ& G, const MatJ& N);
TorsionBlocks dtorsion(const DConnBlocksJ& G, const MatJ& N);
TorsionBlocks values(const TorsionBlocksJ& T);

CurvatureBlocks dcurvature(const DConnBlocksJ& G, const MatJ& N);

struct RicciBlocks {
  MatD hh;  // R_ij
  MatD hv;  // R_ia
  MatD vh;  // R_ai
  MatD vv;  // R_ab (fiber labels follow the bundle kind)
};

RicciBlocks ricci(const CurvatureBlocks& C);

struct ScalarCurvature {
  double horizontal = 0, vertical = 0, total = 0;  // R, S, R + S
};

// g covariant; h is the stored fiber block (covariant for vector bundles,
// contravariant for covector bundles); contractions use the block inverses.
ScalarCurvature scalar_curvature(const RicciBlocks& ric, const MatD& g, const MatD& h);

struct PairBlocks {
  MatD hh, hv, vh, vv;
};

PairBlocks einstein_dtensor(const RicciBlocks& ric, const MatD& g, const MatD& h,
                            double scalar_total);
PairBlocks phi_tensor(const RicciBlocks& ric, const MatD& g, const MatD& h,
                      double scalar_total, int n, int m);

double phi_trace(const PairBlocks& phi, const MatD& g, const MatD& h);

// conformal Weyl d-tensor in the two-up/two-down position over the full
// adapted frame; requires n + m >= 3
Ten4D weyl_dtensor(const CurvatureBlocks& C, const RicciBlocks& ric,
                   double scalar_total, const MatD& g, const MatD& h);

// worst single-trace contraction of the Weyl tensor
double weyl_trace_residual(const Ten4D& W);

// full-frame assemblies used by the identity checks
Ten4D curvature_full(const CurvatureBlocks& C);
Ten3D torsion_full(const TorsionBlocks& T);

struct BianchiResiduals {
  double first = 0, second = 0;
};

// Ricci and Bianchi identity residuals for the chosen connection; the
// curvature derivative in the second identity is finite-differenced with the
// given step, everything else comes from jets.
BianchiResiduals bianchi_residuals(const MetricField& gf, const NConnectionField& Nf,
                                   ConnectionType type, const ChartPoint& u,
                                   double fd_step = 1e-4);

}  // namespace anisogeo
