#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anisogeo/engine.hpp"
#include "anisogeo/report.hpp"
#include "anisogeo/specfile.hpp"

using namespace anisogeo;

namespace {

const char* kRandersSpec = R"spec(
schema_version 1
[space]
class finsler
n 2
m 2
fundamental "sqrt(y1^2+y2^2)+0.3*y1"
connection canonical
[points]
point 0.4 0.7 1.0 0.5
[checks]
check frame_duality
check metricity
)spec";

}  // namespace

TEST_CASE("spec file parsing") {
  SpecFile sf = SpecFile::parse_text(kRandersSpec);
  CHECK(sf.schema_version == 1);
  CHECK(sf.has_space);
  CHECK(sf.space.cls == SpaceClass::Finsler);
  CHECK(sf.space.n == 2);
  CHECK(sf.space.fundamental->str() == "sqrt(y1^2+y2^2)+0.3*y1");
  CHECK(sf.points.size() == 1);
  CHECK(sf.checks == std::vector<std::string>{"frame_duality", "metricity"});
}

TEST_CASE("spec errors carry line numbers; expression errors carry offsets") {
  CHECK_THROWS_AS(SpecFile::parse_text("schema_version 2\n"), SpecError);
  try {
    SpecFile::parse_text("schema_version 1\n[space]\nclass finsler\nn 2\nm 2\n"
                         "fundamental \"y3\"\n");
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    std::string msg = e.what();
    CHECK(msg.find("byte") != std::string::npos);  // parser offset surfaced
    CHECK(e.line() == 6);
  }
  CHECK_THROWS_AS(SpecFile::parse_text("x 1\n"), SpecError);
  CHECK_THROWS_AS(SpecFile::parse_text("schema_version 1\n[space]\nbogus 3\n"),
                  SpecError);
  // unterminated quote
  CHECK_THROWS_AS(
      SpecFile::parse_text("schema_version 1\n[space]\nfundamental \"y1\n"), SpecError);
}

TEST_CASE("metric and nconnection sections fill symmetric component tables") {
  const char* text = R"spec(
schema_version 1
[space]
class glagrange
n 2
m 2
[metric]
component 1 1 "1+y2^2"
component 1 2 "0.1*y1*y2"
component 2 2 "1"
[nconnection]
N 1 1 "x1*y1"
)spec";
  SpecFile sf = SpecFile::parse_text(text);
  CHECK(sf.space.metric_components.size() == 4);
  CHECK(sf.space.metric_components[1].str() == sf.space.metric_components[2].str());
  CHECK(sf.space.n_connection.size() == 4);
  CHECK(sf.space.n_connection[0].str() == "x1*y1");
  CHECK(sf.space.n_connection[3].str() == "0");
  Space s = Space::make(sf.space);
  CHECK(s.kind() == FiberKind::Vector);
}

TEST_CASE("grid expansion: row count and lexicographic order") {
  const char* text = R"spec(
schema_version 1
[space]
class finsler
n 2
m 2
fundamental "sqrt(y1^2+y2^2)"
[grid]
axis x1 0.0 1.0 3
axis y1 0.5 1.0 2
fixed x2 0.25
fixed y2 0.75
)spec";
  SpecFile sf = SpecFile::parse_text(text);
  Space s = Space::make(sf.space);
  auto pts = grid_points(*sf.grid, s);
  REQUIRE(pts.size() == 6);
  // first axis slowest, second fastest
  CHECK(pts[0].u == std::vector<double>{0.0, 0.25, 0.5, 0.75});
  CHECK(pts[1].u == std::vector<double>{0.0, 0.25, 1.0, 0.75});
  CHECK(pts[2].u == std::vector<double>{0.5, 0.25, 0.5, 0.75});
  CHECK(pts[5].u == std::vector<double>{1.0, 0.25, 1.0, 0.75});
  // unknown coordinates are rejected
  GridSpec bad = *sf.grid;
  bad.axes[0].coord = "p1";
  CHECK_THROWS_AS(grid_points(bad, s), SpecError);
}

TEST_CASE("deterministic JSON emission") {
  Report empty;
  CHECK(emit_report(empty, ReportFormat::Json) ==
        "{\"diagnostics\":{},\"points\":[],\"residuals\":{}}\n");

  Report r;
  r.residuals["metricity_canonical"] = {1.25e-12, 1e-8};
  std::string out = emit_report(r, ReportFormat::Json);
  std::string expect = "\"metricity_canonical\":{\"tolerance\":" + format_double(1e-8) +
                       ",\"value\":" + format_double(1.25e-12) + "}";
  CHECK(out.find(expect) != std::string::npos);
  // byte-identical across repeated emission
  CHECK(emit_report(r, ReportFormat::Json) == out);

  Report g;
  g.grid_header = {"x1", "scalar_curvature"};
  g.grid_rows = {{0.5, 2.0}, {1.0, 2.0}};
  std::string csv = emit_report(g, ReportFormat::CsvGrid);
  CHECK(csv == "x1,scalar_curvature\n0.5,2\n1,2\n");
}

TEST_CASE("check suite through the engine is deterministic and passes") {
  SpecFile sf = SpecFile::parse_text(kRandersSpec);
  Engine engine(Space::make(sf.space));
  std::vector<ChartPoint> pts;
  for (const auto& c : sf.points) pts.push_back(engine.space().point(c));
  auto run = [&]() {
    Report rep;
    for (const auto& cr :
         engine.run_checks(Engine::default_checks(), pts, 4, 1.0, 0x5eed))
      rep.residuals[cr.name] = {cr.residual, cr.tolerance};
    return emit_report(rep, ReportFormat::Json);
  };
  std::string a = run(), b = run();
  CHECK(a == b);
  for (const auto& cr :
       engine.run_checks(Engine::default_checks(), pts, 4, 1.0, 0x5eed))
    CHECK(cr.pass);
}

TEST_CASE("tolerance scaling flips a passing suite") {
  SpecFile sf = SpecFile::parse_text(kRandersSpec);
  Engine engine(Space::make(sf.space));
  std::vector<ChartPoint> pts{engine.space().point(sf.points[0])};
  auto strict = engine.run_checks({"bianchi"}, pts, 0, 1e-30, 0x5eed);
  CHECK_FALSE(strict[0].pass);
  auto normal = engine.run_checks({"bianchi"}, pts, 0, 1.0, 0x5eed);
  CHECK(normal[0].pass);
}

TEST_CASE("unknown check names are rejected") {
  SpecFile sf = SpecFile::parse_text(kRandersSpec);
  Engine engine(Space::make(sf.space));
  std::vector<ChartPoint> pts{engine.space().point(sf.points[0])};
  CHECK_THROWS(engine.run_checks({"bogus"}, pts, 0, 1.0, 1));
}

TEST_CASE("parallel batch matches the serial reference bit for bit") {
  SpecFile sf = SpecFile::parse_text(kRandersSpec);
  Engine engine(Space::make(sf.space));
  std::vector<ChartPoint> pts;
  for (int i = 0; i < 32; ++i) {
    double t = 0.3 + 0.02 * i;
    pts.push_back(engine.space().point({t, 0.5 - 0.01 * i, 1.0, 0.4 + 0.01 * i}));
  }
  auto serial = engine.evaluate_batch_serial(pts);
  auto parallel = engine.evaluate_batch_parallel(pts);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].scalar.total == parallel[i].scalar.total);
    for (std::size_t k = 0; k < serial[i].curvature.Rh.a.size(); ++k)
      CHECK(serial[i].curvature.Rh.a[k] == parallel[i].curvature.Rh.a[k]);
    for (std::size_t k = 0; k < serial[i].gamma.Lv.a.size(); ++k)
      CHECK(serial[i].gamma.Lv.a[k] == parallel[i].gamma.Lv.a[k]);
  }
}
