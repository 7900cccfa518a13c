// Compares the serial reference batch evaluator against the OpenMP variant
// on a grid of curvature evaluations and verifies bit-identical results.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "anisogeo/engine.hpp"

using namespace anisogeo;

namespace {

double checksum(const std::vector<PointEvaluation>& evs) {
  double acc = 0;
  for (const auto& ev : evs) {
    acc += ev.scalar.total + ev.scalar.horizontal;
    for (double v : ev.curvature.Rh.a) acc += v;
    for (double v : ev.torsion.Phvv.a) acc += v;
  }
  return acc;
}

bool identical(const std::vector<PointEvaluation>& a,
               const std::vector<PointEvaluation>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(a[i].curvature.Rh.a.data(), b[i].curvature.Rh.a.data(),
                    a[i].curvature.Rh.a.size() * sizeof(double)) != 0)
      return false;
    if (a[i].scalar.total != b[i].scalar.total) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int npts = argc > 1 ? std::atoi(argv[1]) : 256;
  SpaceSpec spec;
  spec.cls = SpaceClass::Finsler;
  spec.n = spec.m = 2;
  spec.fundamental = Expr::parse("sqrt(exp(2*x1)*y1^2+(1+x2^2)*y2^2)+0.3*y1", 2, 2,
                                 FiberKind::Vector);
  Engine engine(Space::make(spec));

  std::vector<ChartPoint> pts;
  for (int i = 0; i < npts; ++i) {
    double t = static_cast<double>(i) / npts;
    pts.push_back(engine.space().point(
        {0.2 + 0.5 * t, 0.1 + 0.3 * t, 0.8 + 0.4 * t, 0.5 + 0.2 * t}));
  }

  auto t0 = std::chrono::steady_clock::now();
  auto serial = engine.evaluate_batch_serial(pts);
  auto t1 = std::chrono::steady_clock::now();
  auto parallel = engine.evaluate_batch_parallel(pts);
  auto t2 = std::chrono::steady_clock::now();

  double ts = std::chrono::duration<double, std::milli>(t1 - t0).count();
  double tp = std::chrono::duration<double, std::milli>(t2 - t1).count();
  std::printf("points            %d\n", npts);
  std::printf("serial            %.1f ms  (%.3f ms/point)\n", ts, ts / npts);
  std::printf("openmp            %.1f ms  (%.3f ms/point)\n", tp, tp / npts);
  std::printf("speedup           %.2fx\n", ts / tp);
  std::printf("checksum          %.17g\n", checksum(serial));
  bool same = identical(serial, parallel);
  std::printf("outputs identical %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
