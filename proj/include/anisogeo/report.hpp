#pragma once

#include <map>
#include <string>
#include <vector>

namespace anisogeo {

// Structured run report with deterministic serialization: keys sorted, floats
// printed with 17 significant digits, LF line endings.
struct Report {
  std::map<std::string, double> diagnostics;
  std::map<std::string, std::string> diagnostics_text;

  struct PointBlock {
    std::vector<double> coords;
    // tensor name -> index label ("i,j" / "a,b,c", 1-based) -> value
    std::map<std::string, std::map<std::string, double>> tensors;
    std::map<std::string, double> scalars;
  };
  std::vector<PointBlock> points;

  struct Residual {
    double value = 0;
    double tolerance = 0;
  };
  std::map<std::string, Residual> residuals;

  std::vector<std::string> grid_header;
  std::vector<std::vector<double>> grid_rows;
};

enum class ReportFormat { Json, CsvGrid, Text };

std::string format_double(double v);  // %.17g
std::string emit_report(const Report& r, ReportFormat format);

}  // namespace anisogeo
