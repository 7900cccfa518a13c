#include "anisogeo/engine.hpp"

#include <cmath>
#include <random>

#ifdef ANISOGEO_HAVE_OPENMP
#include <omp.h>
#endif

namespace anisogeo {

Engine::Engine(Space space)
    : space_(std::move(space)),
      metric_(std::make_shared<SpaceMetricField>(space_)),
      nconn_(space_.nconn_field()) {}

PointEvaluation Engine::evaluate(const ChartPoint& u) const {
  PointEvaluation ev;
  ev.u = u;
  MatJ Nj = nconn_->eval(u, 2);
  DConnBlocksJ Gj = build_dconnection_jets(*metric_, *nconn_, connection(), u, 1);
  ev.g = values(metric_->g(u, 0));
  ev.h = values(metric_->h(u, 0));
  ev.N = values(Nj);
  ev.frame = adapted_frame(ev.N, base_dim(), fiber_dim(), space_.kind());
  ev.anholonomy = anholonomy_coefficients(*nconn_, u);
  {
    Ten3<Jet> oj = nconn_curvature_jets(Nj, base_dim(), fiber_dim(), space_.kind());
    ev.omega = Ten3D(oj.d0, oj.d1, oj.d2);
    for (std::size_t i = 0; i < oj.a.size(); ++i) ev.omega.a[i] = oj.a[i].value();
  }
  ev.gamma = values(Gj);
  ev.torsion = dtorsion(Gj, Nj);
  ev.curvature = dcurvature(Gj, Nj);
  ev.ric = ricci(ev.curvature);
  ev.scalar = scalar_curvature(ev.ric, ev.g, ev.h);
  ev.einstein = einstein_dtensor(ev.ric, ev.g, ev.h, ev.scalar.total);
  ev.phi = phi_tensor(ev.ric, ev.g, ev.h, ev.scalar.total, base_dim(), fiber_dim());
  if (base_dim() + fiber_dim() >= 3)
    ev.weyl = weyl_dtensor(ev.curvature, ev.ric, ev.scalar.total, ev.g, ev.h);
  auto ge = symmetric_eigenvalues(ev.g);
  auto he = symmetric_eigenvalues(ev.h);
  ev.g_eig_min = ge.front();
  ev.g_eig_max = ge.back();
  ev.h_eig_min = he.front();
  ev.h_eig_max = he.back();
  ev.g_det = det(ev.g);
  ev.h_det = det(ev.h);
  return ev;
}

std::vector<PointEvaluation> Engine::evaluate_batch_serial(
    const std::vector<ChartPoint>& pts) const {
  std::vector<PointEvaluation> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = evaluate(pts[i]);
  return out;
}

std::vector<PointEvaluation> Engine::evaluate_batch_parallel(
    const std::vector<ChartPoint>& pts) const {
  std::vector<PointEvaluation> out(pts.size());
#ifdef ANISOGEO_HAVE_OPENMP
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(pts.size()); ++i) {
    try {
      out[i] = evaluate(pts[i]);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
#else
  out = evaluate_batch_serial(pts);
#endif
  return out;
}

const std::vector<std::string>& Engine::default_checks() {
  static const std::vector<std::string> names = {
      "frame_duality",        "metricity", "torsion_antisymmetry",
      "curvature_antisymmetry", "phi_trace", "bianchi"};
  return names;
}

namespace {

double frame_duality_residual(const PointEvaluation& ev) {
  MatD I = matmul(ev.frame.C, ev.frame.D);
  double worst = 0.0;
  for (int i = 0; i < I.rows; ++i)
    for (int j = 0; j < I.cols; ++j)
      worst = std::max(worst, std::abs(I(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

double torsion_antisym_residual(const TorsionBlocks& T) {
  double w = 0.0;
  for (int i = 0; i < T.n; ++i)
    for (int j = 0; j < T.n; ++j)
      for (int k = 0; k < T.n; ++k)
        w = std::max(w, std::abs(T.Thhh(i, j, k) + T.Thhh(i, k, j)));
  for (int a = 0; a < T.m; ++a)
    for (int i = 0; i < T.n; ++i)
      for (int j = 0; j < T.n; ++j)
        w = std::max(w, std::abs(T.Thhv(a, i, j) + T.Thhv(a, j, i)));
  for (int a = 0; a < T.m; ++a)
    for (int b = 0; b < T.m; ++b)
      for (int c = 0; c < T.m; ++c)
        w = std::max(w, std::abs(T.Svvv(a, b, c) + T.Svvv(a, c, b)));
  return w;
}

double curvature_antisym_residual(const CurvatureBlocks& C) {
  double w = 0.0;
  for (int i = 0; i < C.n; ++i)
    for (int h = 0; h < C.n; ++h)
      for (int j = 0; j < C.n; ++j)
        for (int k = 0; k < C.n; ++k)
          w = std::max(w, std::abs(C.Rh(i, h, j, k) + C.Rh(i, h, k, j)));
  for (int a = 0; a < C.m; ++a)
    for (int b = 0; b < C.m; ++b)
      for (int j = 0; j < C.n; ++j)
        for (int k = 0; k < C.n; ++k)
          w = std::max(w, std::abs(C.Rv(a, b, j, k) + C.Rv(a, b, k, j)));
  for (int i = 0; i < C.n; ++i)
    for (int j = 0; j < C.n; ++j)
      for (int b = 0; b < C.m; ++b)
        for (int c = 0; c < C.m; ++c)
          w = std::max(w, std::abs(C.Sh(i, j, b, c) + C.Sh(i, j, c, b)));
  for (int a = 0; a < C.m; ++a)
    for (int b = 0; b < C.m; ++b)
      for (int c = 0; c < C.m; ++c)
        for (int e = 0; e < C.m; ++e)
          w = std::max(w, std::abs(C.Sv(a, b, c, e) + C.Sv(a, b, e, c)));
  return w;
}

}  // namespace

std::vector<CheckResult> Engine::run_checks(const std::vector<std::string>& names,
                                            const std::vector<ChartPoint>& anchors,
                                            int samples_per_anchor, double tol_scale,
                                            std::uint64_t seed) const {
  if (anchors.empty())
    throw DimensionError("run_checks: needs at least one anchor point");
  // sample points: anchors plus deterministic jitter around them
  std::vector<ChartPoint> pts = anchors;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> J(-0.1, 0.1);
  for (const ChartPoint& a : anchors)
    for (int s = 0; s < samples_per_anchor; ++s) {
      std::vector<double> c = a.u;
      for (double& x : c) x += J(rng) * (1.0 + std::abs(x));
      pts.emplace_back(a.n, a.m, a.kind, std::move(c));
    }

  std::vector<PointEvaluation> evs = evaluate_batch_parallel(pts);

  std::vector<CheckResult> out;
  for (const std::string& name : names) {
    CheckResult r;
    r.name = name;
    if (name == "frame_duality") {
      r.tolerance = 1e-12;
      for (const auto& ev : evs)
        r.residual = std::max(r.residual, frame_duality_residual(ev));
    } else if (name == "metricity") {
      r.tolerance = 1e-8;
      for (const auto& ev : evs) {
        MetricityResiduals mr = metricity_residuals(*metric_, *nconn_, ev.gamma, ev.u);
        double v = connection() == ConnectionType::Canonical
                       ? mr.max()
                       : std::max(mr.hg, mr.vh);  // hv-metricity only
        r.residual = std::max(r.residual, v);
      }
    } else if (name == "torsion_antisymmetry") {
      r.tolerance = 1e-14;
      for (const auto& ev : evs)
        r.residual = std::max(r.residual, torsion_antisym_residual(ev.torsion));
    } else if (name == "curvature_antisymmetry") {
      r.tolerance = 1e-14;
      for (const auto& ev : evs)
        r.residual = std::max(r.residual, curvature_antisym_residual(ev.curvature));
    } else if (name == "phi_trace") {
      r.tolerance = 1e-10;
      for (const auto& ev : evs)
        r.residual = std::max(r.residual, std::abs(phi_trace(ev.phi, ev.g, ev.h)));
    } else if (name == "weyl_trace") {
      r.tolerance = 1e-8;
      for (const auto& ev : evs)
        if (ev.weyl.d0 > 0)
          r.residual = std::max(r.residual, weyl_trace_residual(ev.weyl));
    } else if (name == "bianchi") {
      r.tolerance = 1e-3;
      // identity checks are derivative-heavy; anchors only
      for (const ChartPoint& a : anchors) {
        BianchiResiduals b = bianchi_residuals(*metric_, *nconn_, connection(), a);
        r.residual = std::max(r.residual, std::max(b.first, b.second));
      }
    } else if (name == "homogeneity") {
      r.tolerance = 1e-10;
      if (space_.cls() != SpaceClass::Finsler)
        throw DimensionError("homogeneity check applies to finsler spaces");
      for (const auto& ev : evs)
        for (double lam : {0.5, 2.0, 3.7})
          r.residual = std::max(r.residual, finsler_homogeneity_residual(
                                                *space_.spec().fundamental, ev.u, lam));
    } else if (name == "kahler_closedness") {
      r.tolerance = 1e-6;
      for (const ChartPoint& a : anchors)
        r.residual = std::max(r.residual, space_.kahler_closedness_residual(a));
    } else {
      throw DimensionError("unknown check suite '" + name + "'");
    }
    r.tolerance *= tol_scale;
    r.pass = r.residual <= r.tolerance;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace anisogeo
