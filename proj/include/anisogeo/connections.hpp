#pragma once

#include <functional>

#include "anisogeo/geometry.hpp"

namespace anisogeo {

enum class ConnectionType { Canonical, Berwald, Christoffel };

// The four coefficient families of a d-connection.  Storage is uniform for
// both bundle kinds: block(out, in, dir) is the coefficient of the covariant
// derivative of frame element `in` along direction `dir` on frame element
// `out`.  For covector bundles this realizes the transposed fiber-index
// placement of the dual formulas.
template <class T>
struct DConnBlocks {
  FiberKind kind = FiberKind::Vector;
  int n = 0, m = 0;
  Ten3<T> Lh;  // (i, j, k)
  Ten3<T> Lv;  // (a, b, k)
  Ten3<T> Ch;  // (i, j, c)
  Ten3<T> Cv;  // (a, b, c)

  DConnBlocks() = default;
  DConnBlocks(FiberKind k, int n_, int m_)
      : kind(k), n(n_), m(m_), Lh(n_, n_, n_), Lv(m_, m_, n_), Ch(n_, n_, m_),
        Cv(m_, m_, m_) {}
};

using DConnBlocksD = DConnBlocks<double>;
using DConnBlocksJ = DConnBlocks<Jet>;

// Metric block fields g_ij(u) and the fiber block (h_ab covariant for vector
// bundles, the contravariant fiber metric for covector bundles).
class MetricField {
public:
  MetricField(int n, int m, FiberKind kind) : n_(n), m_(m), kind_(kind) {}
  virtual ~MetricField() = default;
  int base_dim() const { return n_; }
  int fiber_dim() const { return m_; }
  FiberKind kind() const { return kind_; }
  virtual MatJ g(const ChartPoint& u, int order) const = 0;
  virtual MatJ h(const ChartPoint& u, int order) const = 0;

private:
  int n_, m_;
  FiberKind kind_;
};

class FunctionMetricField : public MetricField {
public:
  using Fn = std::function<MatJ(const ChartPoint&, int)>;
  FunctionMetricField(int n, int m, FiberKind kind, Fn gf, Fn hf)
      : MetricField(n, m, kind), gf_(std::move(gf)), hf_(std::move(hf)) {}
  MatJ g(const ChartPoint& u, int order) const override { return gf_(u, order); }
  MatJ h(const ChartPoint& u, int order) const override { return hf_(u, order); }

private:
  Fn gf_, hf_;
};

// jet-level builders; metric and N jets must carry at least `order + 1`
DConnBlocksJ christoffel_dsymbols_jets(const MatJ& g, const MatJ& h, const MatJ& N,
                                       int n, int m, FiberKind kind);
DConnBlocksJ berwald_dconnection_jets(const MatJ& g, const MatJ& h, const MatJ& N,
                                      int n, int m, FiberKind kind);
DConnBlocksJ canonical_dconnection_jets(const MatJ& g, const MatJ& h, const MatJ& N,
                                        int n, int m, FiberKind kind);

DConnBlocksD christoffel_dsymbols(const MetricField& g, const NConnectionField& N,
                                  const ChartPoint& u);
DConnBlocksD berwald_dconnection(const MetricField& g, const NConnectionField& N,
                                 const ChartPoint& u);
DConnBlocksD canonical_dconnection(const MetricField& g, const NConnectionField& N,
                                   const ChartPoint& u);

DConnBlocksJ build_dconnection_jets(const MetricField& g, const NConnectionField& N,
                                    ConnectionType type, const ChartPoint& u, int order);

DConnBlocksD values(const DConnBlocksJ& G);

// deformation d-tensor P = G1 - G2, blockwise
DConnBlocksD deformation_tensor(const DConnBlocksD& G1, const DConnBlocksD& G2);

// ---- d-tensor fields and covariant derivatives ----------------------------

// slot character in adapted-frame terms: components on frame vectors
// (delta_i / fiber frame element) or on coframe elements
enum class SlotType { HVec, VVec, HForm, VForm };

struct DTensorShape {
  int n = 0, m = 0;
  std::vector<SlotType> slots;

  int dim(int slot) const {
    SlotType s = slots[slot];
    return (s == SlotType::HVec || s == SlotType::HForm) ? n : m;
  }
  std::size_t size() const {
    std::size_t t = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) t *= dim(static_cast<int>(s));
    return t;
  }
};

struct DTensorField {
  DTensorShape shape;
  FiberKind kind = FiberKind::Vector;
  // component jets at u, flattened row-major over the slots
  std::function<std::vector<Jet>(const ChartPoint&, int order)> eval;
};

struct DCovariantDerivative {
  std::vector<double> h;  // shape size x n, trailing h-direction index
  std::vector<double> v;  // shape size x m, trailing v-direction index
};

DCovariantDerivative dcovariant_derivative(const DConnBlocksD& G, const MatD& Nvals,
                                           const DTensorField& T, const ChartPoint& u);

// metricity residuals of the four block conditions (D_k g, D_c g, D_k h, D_c h)
struct MetricityResiduals {
  double hg = 0, vg = 0, hh = 0, vh = 0;
  double max() const { return std::max(std::max(hg, vg), std::max(hh, vh)); }
};

MetricityResiduals metricity_residuals(const MetricField& gf, const NConnectionField& Nf,
                                       const DConnBlocksD& G, const ChartPoint& u);

}  // namespace anisogeo
