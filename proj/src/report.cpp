#include "anisogeo/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace anisogeo {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

void emit_json(const Report& r, std::ostringstream& os) {
  os << "{";
  os << "\"diagnostics\":{";
  {
    bool first = true;
    // numeric and text diagnostics share one sorted object
    std::map<std::string, std::string> merged;
    for (const auto& [k, v] : r.diagnostics) merged[k] = format_double(v);
    for (const auto& [k, v] : r.diagnostics_text) merged[k] = "\"" + json_escape(v) + "\"";
    for (const auto& [k, v] : merged) {
      if (!first) os << ",";
      first = false;
      os << "\"" << json_escape(k) << "\":" << v;
    }
  }
  os << "},";
  os << "\"points\":[";
  for (std::size_t p = 0; p < r.points.size(); ++p) {
    if (p) os << ",";
    const auto& pb = r.points[p];
    os << "{\"coords\":[";
    for (std::size_t i = 0; i < pb.coords.size(); ++i) {
      if (i) os << ",";
      os << format_double(pb.coords[i]);
    }
    os << "],\"scalars\":{";
    bool first = true;
    for (const auto& [k, v] : pb.scalars) {
      if (!first) os << ",";
      first = false;
      os << "\"" << json_escape(k) << "\":" << format_double(v);
    }
    os << "},\"tensors\":{";
    first = true;
    for (const auto& [name, entries] : pb.tensors) {
      if (!first) os << ",";
      first = false;
      os << "\"" << json_escape(name) << "\":{";
      bool f2 = true;
      for (const auto& [idx, v] : entries) {
        if (!f2) os << ",";
        f2 = false;
        os << "\"" << idx << "\":" << format_double(v);
      }
      os << "}";
    }
    os << "}}";
  }
  os << "],";
  os << "\"residuals\":{";
  {
    bool first = true;
    for (const auto& [k, v] : r.residuals) {
      if (!first) os << ",";
      first = false;
      os << "\"" << json_escape(k) << "\":{\"tolerance\":" << format_double(v.tolerance)
         << ",\"value\":" << format_double(v.value) << "}";
    }
  }
  os << "}";
  os << "}\n";
}

void emit_csv(const Report& r, std::ostringstream& os) {
  for (std::size_t i = 0; i < r.grid_header.size(); ++i) {
    if (i) os << ",";
    os << r.grid_header[i];
  }
  os << "\n";
  for (const auto& row : r.grid_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      os << format_double(row[i]);
    }
    os << "\n";
  }
}

void emit_text(const Report& r, std::ostringstream& os) {
  if (!r.diagnostics.empty() || !r.diagnostics_text.empty()) {
    os << "diagnostics:\n";
    for (const auto& [k, v] : r.diagnostics)
      os << "  " << k << " = " << format_double(v) << "\n";
    for (const auto& [k, v] : r.diagnostics_text) os << "  " << k << " = " << v << "\n";
  }
  for (std::size_t p = 0; p < r.points.size(); ++p) {
    const auto& pb = r.points[p];
    os << "point " << p << ":";
    for (double c : pb.coords) os << " " << format_double(c);
    os << "\n";
    for (const auto& [k, v] : pb.scalars)
      os << "  " << k << " = " << format_double(v) << "\n";
    for (const auto& [name, entries] : pb.tensors) {
      os << "  " << name << ":\n";
      for (const auto& [idx, v] : entries)
        os << "    [" << idx << "] = " << format_double(v) << "\n";
    }
  }
  if (!r.residuals.empty()) {
    os << "residuals:\n";
    for (const auto& [k, v] : r.residuals)
      os << "  " << k << " = " << format_double(v.value)
         << " (tolerance " << format_double(v.tolerance) << ")\n";
  }
  if (!r.grid_header.empty()) emit_csv(r, os);
}

}  // namespace

std::string emit_report(const Report& r, ReportFormat format) {
  std::ostringstream os;
  switch (format) {
    case ReportFormat::Json: emit_json(r, os); break;
    case ReportFormat::CsvGrid: emit_csv(r, os); break;
    case ReportFormat::Text: emit_text(r, os); break;
    default: throw std::invalid_argument("unsupported report format");
  }
  return os.str();
}

}  // namespace anisogeo
