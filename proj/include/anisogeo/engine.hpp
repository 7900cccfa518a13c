#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "anisogeo/curvature.hpp"
#include "anisogeo/spaces.hpp"

namespace anisogeo {

class SpaceMetricField : public MetricField {
public:
  explicit SpaceMetricField(Space space)
      : MetricField(space.base_dim(), space.fiber_dim(), space.kind()),
        space_(std::move(space)) {}
  MatJ g(const ChartPoint& u, int order) const override {
    return space_.metric_g_jets(u, order);
  }
  MatJ h(const ChartPoint& u, int order) const override {
    return space_.metric_h_jets(u, order);
  }

private:
  Space space_;
};

struct PointEvaluation {
  ChartPoint u;
  MatD g, h, N;
  AdaptedFrame frame;
  Ten3D anholonomy;
  Ten3D omega;
  DConnBlocksD gamma;
  TorsionBlocks torsion;
  CurvatureBlocks curvature;
  RicciBlocks ric;
  ScalarCurvature scalar;
  PairBlocks einstein, phi;
  Ten4D weyl;  // populated when n + m >= 3
  double g_eig_min = 0, g_eig_max = 0, h_eig_min = 0, h_eig_max = 0;
  double g_det = 0, h_det = 0;
};

struct CheckResult {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
};

// Per-point evaluation pipeline over one space plus the batch drivers.  The
// batch runs points independently; the parallel variant distributes them
// over OpenMP threads and stores results by index, so its output is
// bit-identical to the serial reference.
class Engine {
public:
  explicit Engine(Space space);

  const Space& space() const { return space_; }
  ConnectionType connection() const { return space_.spec().connection; }
  int base_dim() const { return space_.base_dim(); }
  int fiber_dim() const { return space_.fiber_dim(); }

  const MetricField& metric_field() const { return *metric_; }
  const NConnectionField& nconn_field() const { return *nconn_; }

  PointEvaluation evaluate(const ChartPoint& u) const;
  std::vector<PointEvaluation> evaluate_batch_serial(const std::vector<ChartPoint>& pts) const;
  std::vector<PointEvaluation> evaluate_batch_parallel(const std::vector<ChartPoint>& pts) const;

  // identity suites; sampled points are the anchors plus seeded jitter
  std::vector<CheckResult> run_checks(const std::vector<std::string>& names,
                                      const std::vector<ChartPoint>& anchors,
                                      int samples_per_anchor, double tol_scale,
                                      std::uint64_t seed) const;

  static const std::vector<std::string>& default_checks();

private:
  Space space_;
  std::shared_ptr<SpaceMetricField> metric_;
  std::shared_ptr<NConnectionField> nconn_;
};

}  // namespace anisogeo
