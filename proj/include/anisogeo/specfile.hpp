#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "anisogeo/spaces.hpp"

namespace anisogeo {

class SpecError : public std::runtime_error {
public:
  SpecError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

struct GridAxis {
  std::string coord;  // x1.., y1.. / p1..
  double lo = 0, hi = 0;
  int count = 0;
};

struct GridSpec {
  std::vector<GridAxis> axes;                        // sweep order = listing order
  std::vector<std::pair<std::string, double>> fixed;  // remaining coordinates
};

struct CliffordRequest {
  std::optional<std::pair<int, int>> signature;       // p, q
  std::optional<std::vector<int>> sigma_diag;         // metric diag, size n
  std::optional<std::array<int, 4>> chevalley;        // p1 q1 p2 q2
};

// Parsed line-oriented specification file (sections in brackets, quoted
// expression strings); see the README for the format.
struct SpecFile {
  int schema_version = 1;
  SpaceSpec space;
  bool has_space = false;
  std::vector<std::vector<double>> points;
  std::optional<GridSpec> grid;
  std::vector<std::string> checks;  // empty = default suite
  std::optional<CliffordRequest> clifford;

  static SpecFile parse_file(const std::string& path);
  static SpecFile parse_text(const std::string& text);
};

// coordinate-name resolution ("x2", "y1" / "p1") to a chart slot, -1 if bad
int coord_slot(const std::string& name, int n, int m, FiberKind kind);

// expands a grid specification into chart points; rows are ordered
// lexicographically in the grid indices with the first axis slowest
std::vector<ChartPoint> grid_points(const GridSpec& grid, const Space& space);

}  // namespace anisogeo
