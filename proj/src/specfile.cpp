#include "anisogeo/specfile.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace anisogeo {

namespace {

std::vector<std::string> tokenize(const std::string& line, int lineno) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    if (line[i] == '"') {
      std::size_t end = line.find('"', i + 1);
      if (end == std::string::npos) throw SpecError("unterminated string", lineno);
      toks.push_back(line.substr(i + 1, end - i - 1));
      i = end + 1;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    toks.push_back(line.substr(start, i - start));
  }
  return toks;
}

int to_int(const std::string& s, int lineno) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw SpecError("expected integer, got '" + s + "'", lineno);
  return v;
}

double to_double(const std::string& s, int lineno) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw SpecError("expected number, got '" + s + "'", lineno);
  return v;
}

SpaceClass parse_class(const std::string& s, int lineno) {
  if (s == "finsler") return SpaceClass::Finsler;
  if (s == "lagrange") return SpaceClass::Lagrange;
  if (s == "glagrange") return SpaceClass::GLagrange;
  if (s == "cartan") return SpaceClass::Cartan;
  if (s == "hamilton") return SpaceClass::Hamilton;
  if (s == "ghamilton") return SpaceClass::GHamilton;
  if (s == "riemann") return SpaceClass::Riemann;
  throw SpecError("unknown space class '" + s + "'", lineno);
}

}  // namespace

SpecFile SpecFile::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

SpecFile SpecFile::parse_text(const std::string& text) {
  SpecFile f;
  std::string section;
  // raw expression strings are collected and parsed once dimensions are known
  std::string fundamental_src;
  int fundamental_line = -1;
  std::vector<std::tuple<int, int, std::string, int>> metric_src;    // i, j, expr, line
  std::vector<std::tuple<int, int, std::string, int>> nconn_src;
  bool schema_seen = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = tokenize(line, lineno);
    if (toks.empty()) continue;
    if (toks[0].front() == '[') {
      if (toks.size() != 1 || toks[0].back() != ']')
        throw SpecError("malformed section header", lineno);
      section = toks[0].substr(1, toks[0].size() - 2);
      if (section == "space") f.has_space = true;
      else if (section == "clifford" && !f.clifford) f.clifford.emplace();
      else if (section == "grid" && !f.grid) f.grid.emplace();
      continue;
    }
    const std::string& key = toks[0];
    if (section.empty()) {
      if (key == "schema_version") {
        if (toks.size() != 2) throw SpecError("schema_version takes one value", lineno);
        f.schema_version = to_int(toks[1], lineno);
        if (f.schema_version != 1)
          throw SpecError("unsupported schema_version", lineno);
        schema_seen = true;
      } else {
        throw SpecError("unexpected key '" + key + "' before any section", lineno);
      }
    } else if (section == "space") {
      if (key == "class" && toks.size() == 2)
        f.space.cls = parse_class(toks[1], lineno);
      else if (key == "n" && toks.size() == 2)
        f.space.n = to_int(toks[1], lineno);
      else if (key == "m" && toks.size() == 2)
        f.space.m = to_int(toks[1], lineno);
      else if (key == "fundamental" && toks.size() == 2) {
        fundamental_src = toks[1];
        fundamental_line = lineno;
      } else if (key == "hessian_of" && toks.size() == 2) {
        if (toks[1] == "L2")
          f.space.hessian_of = HessianOf::FundamentalSquared;
        else if (toks[1] == "L")
          f.space.hessian_of = HessianOf::Fundamental;
        else
          throw SpecError("hessian_of must be L2 or L", lineno);
      } else if (key == "connection" && toks.size() == 2) {
        if (toks[1] == "canonical")
          f.space.connection = ConnectionType::Canonical;
        else if (toks[1] == "berwald")
          f.space.connection = ConnectionType::Berwald;
        else if (toks[1] == "christoffel")
          f.space.connection = ConnectionType::Christoffel;
        else
          throw SpecError("connection must be canonical, berwald or christoffel",
                          lineno);
      } else {
        throw SpecError("unknown space key '" + key + "'", lineno);
      }
    } else if (section == "metric") {
      if (key != "component" || toks.size() != 4)
        throw SpecError("metric entries read: component <i> <j> \"expr\"", lineno);
      metric_src.emplace_back(to_int(toks[1], lineno), to_int(toks[2], lineno), toks[3],
                              lineno);
    } else if (section == "nconnection") {
      if (key != "N" || toks.size() != 4)
        throw SpecError("nconnection entries read: N <i> <a> \"expr\"", lineno);
      nconn_src.emplace_back(to_int(toks[1], lineno), to_int(toks[2], lineno), toks[3],
                             lineno);
    } else if (section == "points") {
      if (key != "point" || toks.size() < 2)
        throw SpecError("points entries read: point <c1> ... <cd>", lineno);
      std::vector<double> c;
      for (std::size_t t = 1; t < toks.size(); ++t) c.push_back(to_double(toks[t], lineno));
      f.points.push_back(std::move(c));
    } else if (section == "grid") {
      if (key == "axis" && toks.size() == 5) {
        GridAxis ax{toks[1], to_double(toks[2], lineno), to_double(toks[3], lineno),
                    to_int(toks[4], lineno)};
        if (ax.count < 1) throw SpecError("axis count must be >= 1", lineno);
        f.grid->axes.push_back(std::move(ax));
      } else if (key == "fixed" && toks.size() == 3) {
        f.grid->fixed.emplace_back(toks[1], to_double(toks[2], lineno));
      } else {
        throw SpecError("grid entries read: axis <c> <lo> <hi> <count> | fixed <c> <v>",
                        lineno);
      }
    } else if (section == "checks") {
      if (key != "check" || toks.size() != 2)
        throw SpecError("checks entries read: check <name>", lineno);
      f.checks.push_back(toks[1]);
    } else if (section == "clifford") {
      if (key == "signature" && toks.size() == 3) {
        f.clifford->signature = {to_int(toks[1], lineno), to_int(toks[2], lineno)};
      } else if (key == "sigma" && toks.size() >= 3) {
        int n = to_int(toks[1], lineno);
        if (static_cast<int>(toks.size()) != n + 2)
          throw SpecError("sigma reads: sigma <n> <diag entries>", lineno);
        std::vector<int> diag;
        for (int t = 0; t < n; ++t) diag.push_back(to_int(toks[2 + t], lineno));
        f.clifford->sigma_diag = std::move(diag);
      } else if (key == "chevalley" && toks.size() == 5) {
        f.clifford->chevalley = {to_int(toks[1], lineno), to_int(toks[2], lineno),
                                 to_int(toks[3], lineno), to_int(toks[4], lineno)};
      } else {
        throw SpecError("clifford entries read: signature <p> <q> | sigma <n> <diag> | "
                        "chevalley <p1> <q1> <p2> <q2>",
                        lineno);
      }
    } else {
      throw SpecError("unknown section '" + section + "'", lineno);
    }
  }
  if (!schema_seen) throw SpecError("missing schema_version", 1);

  if (f.has_space) {
    int n = f.space.n, m = f.space.m;
    if (n < 1 || m < 1) throw SpecError("space dimensions must be set and >= 1", 1);
    FiberKind kind =
        (f.space.cls == SpaceClass::Cartan || f.space.cls == SpaceClass::Hamilton ||
         f.space.cls == SpaceClass::GHamilton)
            ? FiberKind::Covector
            : FiberKind::Vector;
    auto parse_expr = [&](const std::string& src, int at) {
      try {
        return Expr::parse(src, n, m, kind);
      } catch (const ParseError& pe) {
        throw SpecError(std::string("expression error: ") + pe.what(), at);
      }
    };
    if (!fundamental_src.empty())
      f.space.fundamental = parse_expr(fundamental_src, fundamental_line);
    if (!metric_src.empty()) {
      f.space.metric_components.assign(static_cast<std::size_t>(n) * n,
                                       parse_expr("0", 1));
      for (auto& [i, j, src, at] : metric_src) {
        if (i < 1 || i > n || j < 1 || j > n)
          throw SpecError("metric component index out of range", at);
        Expr e = parse_expr(src, at);
        f.space.metric_components[static_cast<std::size_t>(i - 1) * n + (j - 1)] = e;
        f.space.metric_components[static_cast<std::size_t>(j - 1) * n + (i - 1)] = e;
      }
    }
    if (!nconn_src.empty()) {
      f.space.n_connection.assign(static_cast<std::size_t>(n) * m, parse_expr("0", 1));
      for (auto& [i, a, src, at] : nconn_src) {
        if (i < 1 || i > n || a < 1 || a > m)
          throw SpecError("n_connection index out of range", at);
        f.space.n_connection[static_cast<std::size_t>(i - 1) * m + (a - 1)] =
            parse_expr(src, at);
      }
    }
    for (const auto& p : f.points)
      if (static_cast<int>(p.size()) != n + m)
        throw SpecError("point has wrong coordinate count", 1);
  }
  return f;
}

int coord_slot(const std::string& name, int n, int m, FiberKind kind) {
  if (name.size() < 2) return -1;
  char c = name[0];
  int idx = 0;
  auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
  if (ec != std::errc() || p != name.data() + name.size()) return -1;
  if (c == 'x' && idx >= 1 && idx <= n) return idx - 1;
  bool vec = kind == FiberKind::Vector;
  if (((vec && c == 'y') || (!vec && c == 'p')) && idx >= 1 && idx <= m)
    return n + idx - 1;
  return -1;
}

std::vector<ChartPoint> grid_points(const GridSpec& grid, const Space& space) {
  int n = space.base_dim(), m = space.fiber_dim(), d = n + m;
  std::vector<double> base(d, 0.0);
  std::vector<bool> covered(d, false);
  for (const auto& [name, v] : grid.fixed) {
    int slot = coord_slot(name, n, m, space.kind());
    if (slot < 0) throw SpecError("unknown grid coordinate '" + name + "'", 0);
    base[slot] = v;
    covered[slot] = true;
  }
  std::vector<int> slots;
  for (const auto& ax : grid.axes) {
    int slot = coord_slot(ax.coord, n, m, space.kind());
    if (slot < 0) throw SpecError("unknown grid axis '" + ax.coord + "'", 0);
    slots.push_back(slot);
    covered[slot] = true;
  }
  for (int i = 0; i < d; ++i)
    if (!covered[i])
      throw SpecError("grid leaves coordinate " + std::to_string(i + 1) + " unset", 0);
  std::size_t total = grid.axes.empty() ? 0 : 1;
  for (const auto& ax : grid.axes) total *= ax.count;
  std::vector<ChartPoint> pts;
  pts.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<double> c = base;
    std::size_t rem = flat;
    for (int axi = static_cast<int>(grid.axes.size()) - 1; axi >= 0; --axi) {
      const auto& ax = grid.axes[axi];
      int idx = static_cast<int>(rem % ax.count);
      rem /= ax.count;
      double v = ax.count == 1 ? ax.lo : ax.lo + (ax.hi - ax.lo) * idx / (ax.count - 1);
      c[slots[axi]] = v;
    }
    pts.push_back(space.point(std::move(c)));
  }
  return pts;
}

}  // namespace anisogeo
