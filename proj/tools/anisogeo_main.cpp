#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "anisogeo/clifford.hpp"
#include "anisogeo/engine.hpp"
#include "anisogeo/report.hpp"
#include "anisogeo/sigma.hpp"
#include "anisogeo/specfile.hpp"

namespace ag = anisogeo;

namespace {

constexpr std::uint64_t kCheckSeed = 0x5eed;

std::string index_label(std::initializer_list<std::pair<const char*, int>> parts) {
  std::string s;
  for (auto& [name, v] : parts) {
    if (!s.empty()) s += ",";
    s += name;
    s += "=";
    s += std::to_string(v + 1);
  }
  return s;
}

void put_mat(ag::Report::PointBlock& pb, const std::string& name, const ag::MatD& M,
             const char* l0, const char* l1) {
  auto& t = pb.tensors[name];
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j)
      t[index_label({{l0, i}, {l1, j}})] = M(i, j);
}

void put_ten3(ag::Report::PointBlock& pb, const std::string& name, const ag::Ten3D& T,
              const char* l0, const char* l1, const char* l2) {
  auto& t = pb.tensors[name];
  for (int i = 0; i < T.d0; ++i)
    for (int j = 0; j < T.d1; ++j)
      for (int k = 0; k < T.d2; ++k)
        t[index_label({{l0, i}, {l1, j}, {l2, k}})] = T(i, j, k);
}

void put_ten4(ag::Report::PointBlock& pb, const std::string& name, const ag::Ten4D& T,
              const char* l0, const char* l1, const char* l2, const char* l3) {
  auto& t = pb.tensors[name];
  for (int i = 0; i < T.d0; ++i)
    for (int j = 0; j < T.d1; ++j)
      for (int k = 0; k < T.d2; ++k)
        for (int l = 0; l < T.d3; ++l)
          t[index_label({{l0, i}, {l1, j}, {l2, k}, {l3, l}})] = T(i, j, k, l);
}

ag::Report::PointBlock point_block(const ag::PointEvaluation& ev) {
  ag::Report::PointBlock pb;
  pb.coords = ev.u.u;
  put_mat(pb, "metric_g", ev.g, "i", "j");
  put_mat(pb, "metric_h", ev.h, "a", "b");
  put_mat(pb, "nconnection", ev.N, "i", "a");
  put_ten3(pb, "omega", ev.omega, "a", "i", "j");
  put_ten3(pb, "conn_L_h", ev.gamma.Lh, "i", "j", "k");
  put_ten3(pb, "conn_L_v", ev.gamma.Lv, "a", "b", "k");
  put_ten3(pb, "conn_C_h", ev.gamma.Ch, "i", "j", "c");
  put_ten3(pb, "conn_C_v", ev.gamma.Cv, "a", "b", "c");
  put_ten3(pb, "torsion_T_hhh", ev.torsion.Thhh, "i", "j", "k");
  put_ten3(pb, "torsion_T_hhv", ev.torsion.Thhv, "a", "i", "j");
  put_ten3(pb, "torsion_P_hvh", ev.torsion.Phvh, "i", "j", "b");
  put_ten3(pb, "torsion_P_hvv", ev.torsion.Phvv, "a", "b", "i");
  put_ten3(pb, "torsion_S_vvv", ev.torsion.Svvv, "a", "b", "c");
  put_ten4(pb, "curv_R_h", ev.curvature.Rh, "i", "h", "j", "k");
  put_ten4(pb, "curv_R_v", ev.curvature.Rv, "a", "b", "j", "k");
  put_ten4(pb, "curv_P_h", ev.curvature.Ph, "i", "j", "k", "c");
  put_ten4(pb, "curv_P_v", ev.curvature.Pv, "a", "b", "k", "c");
  put_ten4(pb, "curv_S_h", ev.curvature.Sh, "i", "j", "b", "c");
  put_ten4(pb, "curv_S_v", ev.curvature.Sv, "a", "b", "c", "d");
  put_mat(pb, "ricci_hh", ev.ric.hh, "i", "j");
  put_mat(pb, "ricci_hv", ev.ric.hv, "i", "a");
  put_mat(pb, "ricci_vh", ev.ric.vh, "a", "i");
  put_mat(pb, "ricci_vv", ev.ric.vv, "a", "b");
  put_mat(pb, "einstein_hh", ev.einstein.hh, "i", "j");
  put_mat(pb, "einstein_vv", ev.einstein.vv, "a", "b");
  put_mat(pb, "phi_hh", ev.phi.hh, "i", "j");
  put_mat(pb, "phi_vv", ev.phi.vv, "a", "b");
  pb.scalars["scalar_curvature"] = ev.scalar.total;
  pb.scalars["scalar_curvature_h"] = ev.scalar.horizontal;
  pb.scalars["scalar_curvature_v"] = ev.scalar.vertical;
  pb.scalars["metric_g_det"] = ev.g_det;
  pb.scalars["metric_h_det"] = ev.h_det;
  pb.scalars["metric_g_eig_min"] = ev.g_eig_min;
  pb.scalars["metric_g_eig_max"] = ev.g_eig_max;
  pb.scalars["metric_h_eig_min"] = ev.h_eig_min;
  pb.scalars["metric_h_eig_max"] = ev.h_eig_max;
  if (ev.weyl.d0 > 0) {
    pb.scalars["weyl_trace_residual"] = ag::weyl_trace_residual(ev.weyl);
    double mx = 0;
    for (double v : ev.weyl.a) mx = std::max(mx, std::abs(v));
    pb.scalars["weyl_max"] = mx;
  }
  return pb;
}

std::vector<ag::ChartPoint> spec_points(const ag::SpecFile& sf, const ag::Space& space) {
  std::vector<ag::ChartPoint> pts;
  for (const auto& c : sf.points) pts.push_back(space.point(c));
  return pts;
}

double torsion_norm(const ag::TorsionBlocks& T) {
  double acc = 0;
  for (double v : T.Thhh.a) acc += v * v;
  for (double v : T.Thhv.a) acc += v * v;
  for (double v : T.Phvh.a) acc += v * v;
  for (double v : T.Phvv.a) acc += v * v;
  for (double v : T.Svvv.a) acc += v * v;
  return std::sqrt(acc);
}

double ricci_norm(const ag::RicciBlocks& r) {
  double acc = 0;
  for (double v : r.hh.a) acc += v * v;
  for (double v : r.hv.a) acc += v * v;
  for (double v : r.vh.a) acc += v * v;
  for (double v : r.vv.a) acc += v * v;
  return std::sqrt(acc);
}

ag::Report run_clifford(const ag::CliffordRequest& req) {
  ag::Report rep;
  if (req.signature) {
    auto [p, q] = *req.signature;
    ag::Signature sig{p, q};
    rep.diagnostics["clifford_dimension"] = std::ldexp(1.0, sig.dim());
    if (sig.dim() <= 2)
      rep.diagnostics_text["clifford_class"] = ag::classify_small(sig);
    // spot-check associativity and the vector norm rule over a few blades
    ag::CliffordElement e1 = ag::CliffordElement::generator(sig, 0);
    ag::CliffordElement s = ag::spinor_norm(e1);
    rep.diagnostics["spinor_norm_e1"] = s.coeff(0).to_double();
  }
  if (req.sigma_diag) {
    ag::SigmaSystem S =
        ag::sigma_system(static_cast<int>(req.sigma_diag->size()), *req.sigma_diag);
    rep.diagnostics["sigma_N"] = S.N;
    rep.diagnostics["sigma_formula_N"] = S.formula_N;
    rep.diagnostics["sigma_escalated"] = S.escalated ? 1.0 : 0.0;
    rep.residuals["sigma_anticommutation"] = {ag::anticommutation_residual(S), 0.0};
    ag::EpsilonReport er = ag::epsilon_objects(S);
    rep.diagnostics["epsilon_plus_zero"] = er.plus_zero ? 1.0 : 0.0;
    rep.diagnostics["epsilon_minus_zero"] = er.minus_zero ? 1.0 : 0.0;
    rep.residuals["epsilon_rank1_plus"] = {er.rank1_residual_plus, 1e-10};
    rep.residuals["epsilon_rank1_minus"] = {er.rank1_residual_minus, 1e-10};
  }
  if (req.chevalley) {
    auto [p1, q1, p2, q2] = *req.chevalley;
    ag::ChevalleyReport cr =
        ag::chevalley_isomorphism_check({p1, q1}, {p2, q2}, 200, kCheckSeed);
    rep.diagnostics["chevalley_multiplicative"] = cr.multiplicative ? 1.0 : 0.0;
    rep.diagnostics["chevalley_generators_roundtrip"] =
        cr.generators_roundtrip ? 1.0 : 0.0;
    rep.residuals["chevalley_multiplicativity"] = {cr.multiplicative ? 0.0 : 1.0, 0.0};
  }
  return rep;
}

int write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) return 4;
  out << payload;
  return out.good() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic-geometry engine"};
  app.require_subcommand(1);

  std::string spec_path, out_path;
  std::string format = "json";
  double tol_scale = 1.0;
  for (const char* name : {"inspect", "eval", "check", "grid", "clifford"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--spec", spec_path)->required();
    sub->add_option("--out", out_path);
    sub->add_option("--format", format)
        ->check(CLI::IsMember({"json", "csv-grid", "text"}));
    sub->add_option("--tolerance-scale", tol_scale);
  }

  CLI11_PARSE(app, argc, argv);
  std::string cmd = app.get_subcommands().front()->get_name();
  ag::ReportFormat rf = format == "json" ? ag::ReportFormat::Json
                        : format == "csv-grid" ? ag::ReportFormat::CsvGrid
                                               : ag::ReportFormat::Text;

  auto t0 = std::chrono::steady_clock::now();
  try {
    ag::SpecFile sf;
    try {
      sf = ag::SpecFile::parse_file(spec_path);
    } catch (const std::ios_base::failure& io) {
      std::cerr << "error: " << io.what() << "\n";
      return 4;
    }

    ag::Report rep;
    int exit_code = 0;

    if (cmd == "clifford") {
      if (!sf.clifford) {
        std::cerr << "error: spec has no [clifford] section\n";
        return 2;
      }
      rep = run_clifford(*sf.clifford);
    } else if (cmd == "inspect") {
      rep.diagnostics["schema_version"] = sf.schema_version;
      if (sf.has_space) {
        ag::Space space = ag::Space::make(sf.space);  // full validation
        rep.diagnostics_text["class"] = ag::to_string(space.cls());
        rep.diagnostics["n"] = space.base_dim();
        rep.diagnostics["m"] = space.fiber_dim();
        if (sf.space.fundamental)
          rep.diagnostics_text["fundamental"] = sf.space.fundamental->str();
        rep.diagnostics["points"] = static_cast<double>(sf.points.size());
        rep.diagnostics_text["connection"] =
            sf.space.connection == ag::ConnectionType::Canonical    ? "canonical"
            : sf.space.connection == ag::ConnectionType::Berwald    ? "berwald"
                                                                    : "christoffel";
      }
      if (sf.clifford) rep.diagnostics["clifford_section"] = 1;
    } else {
      if (!sf.has_space) {
        std::cerr << "error: spec has no [space] section\n";
        return 2;
      }
      ag::Space space = ag::Space::make(sf.space);
      ag::Engine engine(space);

      if (cmd == "eval") {
        auto pts = spec_points(sf, space);
        auto evs = engine.evaluate_batch_parallel(pts);
        for (const auto& ev : evs) rep.points.push_back(point_block(ev));
      } else if (cmd == "check") {
        auto pts = spec_points(sf, space);
        if (pts.empty()) {
          std::cerr << "error: check needs at least one point\n";
          return 2;
        }
        const auto& names = sf.checks.empty() ? ag::Engine::default_checks() : sf.checks;
        auto results = engine.run_checks(names, pts, 4, tol_scale, kCheckSeed);
        bool all_pass = true;
        std::string conn =
            engine.connection() == ag::ConnectionType::Canonical    ? "canonical"
            : engine.connection() == ag::ConnectionType::Berwald    ? "berwald"
                                                                    : "christoffel";
        for (const auto& cr : results) {
          std::string key = cr.name;
          if (cr.name == "metricity") key += "_" + conn;
          rep.residuals[key] = {cr.residual, cr.tolerance};
          all_pass = all_pass && cr.pass;
        }
        exit_code = all_pass ? 0 : 1;
      } else if (cmd == "grid") {
        if (!sf.grid || sf.grid->axes.empty()) {
          std::cerr << "error: grid command needs a [grid] section with axes\n";
          return 2;
        }
        int n = space.base_dim(), m = space.fiber_dim();
        auto pts = ag::grid_points(*sf.grid, space);
        auto evs = engine.evaluate_batch_parallel(pts);
        for (int i = 0; i < n; ++i) rep.grid_header.push_back("x" + std::to_string(i + 1));
        for (int a = 0; a < m; ++a)
          rep.grid_header.push_back(
              (space.kind() == ag::FiberKind::Vector ? "y" : "p") + std::to_string(a + 1));
        rep.grid_header.insert(rep.grid_header.end(),
                               {"scalar_curvature", "scalar_curvature_h",
                                "scalar_curvature_v", "torsion_norm", "ricci_norm"});
        for (const auto& ev : evs) {
          std::vector<double> row = ev.u.u;
          row.push_back(ev.scalar.total);
          row.push_back(ev.scalar.horizontal);
          row.push_back(ev.scalar.vertical);
          row.push_back(torsion_norm(ev.torsion));
          row.push_back(ricci_norm(ev.ric));
          rep.grid_rows.push_back(std::move(row));
          // mirrored into point blocks for the json format
          ag::Report::PointBlock pb;
          pb.coords = ev.u.u;
          pb.scalars["scalar_curvature"] = ev.scalar.total;
          pb.scalars["scalar_curvature_h"] = ev.scalar.horizontal;
          pb.scalars["scalar_curvature_v"] = ev.scalar.vertical;
          pb.scalars["torsion_norm"] = torsion_norm(ev.torsion);
          pb.scalars["ricci_norm"] = ricci_norm(ev.ric);
          rep.points.push_back(std::move(pb));
        }
        if (format == "json") {
          rep.grid_header.clear();
          rep.grid_rows.clear();
        }
      }
    }

    auto t1 = std::chrono::steady_clock::now();
    std::cerr << "elapsed "
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
              << " ms\n";
    int io = write_output(out_path, ag::emit_report(rep, rf));
    if (io != 0) {
      std::cerr << "error: cannot write output\n";
      return io;
    }
    return exit_code;
  } catch (const ag::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const ag::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ag::DimensionError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const ag::DomainError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 3;
  } catch (const ag::JetDomainError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 3;
  } catch (const ag::SingularMatrixError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
