#include "weylscale/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace weylscale {

namespace {

std::string format_float(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write(std::ostringstream& os, const Json& value, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << pad << Json(it.key()).dump() << colon;
        write(os, it.value(), indent, depth + 1);
      }
      os << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        os << "[]";
        return;
      }
      // Short numeric arrays (complex pairs, vectors) stay on one line.
      bool flat = true;
      for (const auto& x : value) flat = flat && (x.is_primitive() || (x.is_array() && x.size() <= 2));
      os << '[';
      bool first = true;
      for (const auto& x : value) {
        if (!first) os << (flat ? ", " : ",");
        first = false;
        if (!flat) os << pad;
        write(os, x, flat ? 0 : indent, depth + 1);
      }
      if (!flat) os << close;
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_float(value.get<double>());
      return;
    default:
      os << value.dump();
  }
}

std::string table_field(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  return dump_json(value, 0);
}

}  // namespace

Json to_json(double x) { return Json(x); }

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

std::string dump_json(const Json& value, int indent) {
  std::ostringstream os;
  write(os, value, indent, 0);
  return os.str();
}

std::string serialize_object(const ReportRecord& record) {
  Json doc;
  doc["experiment"] = record.experiment;
  doc["input"] = record.input;
  doc["cells"] = Json::array();
  for (const auto& cell : record.cells) doc["cells"].push_back(cell);
  doc["summary"] = record.summary;
  doc["failures"] = record.failures;
  doc["passed"] = record.passed();
  return dump_json(doc) + "\n";
}

std::string serialize_table(const ReportRecord& record) {
  std::ostringstream os;
  if (record.cells.empty()) return "";
  std::vector<std::string> columns;
  for (auto it = record.cells.front().begin(); it != record.cells.front().end(); ++it) {
    columns.push_back(it.key());
  }
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "\t" : "") << columns[c];
  os << '\n';
  for (const auto& cell : record.cells) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << '\t';
      if (cell.contains(columns[c])) os << table_field(cell.at(columns[c]));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace weylscale
