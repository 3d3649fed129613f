#pragma once

// Report records and their two serializations. Field order is the insertion
// order of the record; floats are written with 17 significant digits so a
// report round-trips exactly and repeated runs compare byte for byte.

#include <string>
#include <vector>

#include "weylscale/config.hpp"
#include "weylscale/spectral.hpp"

namespace weylscale {

struct ReportRecord {
  std::string experiment;
  Json input;
  std::vector<Json> cells;            // flat objects, one per grid cell
  Json summary = Json::object();
  std::vector<std::string> failures;  // human-readable failing cells

  bool passed() const { return failures.empty(); }
};

Json to_json(double x);
Json to_json(Complex z);            // [re, im]
Json to_json(const Vector& v);      // list of [re, im]

// Nested object document.
std::string serialize_object(const ReportRecord& record);
// Tab-separated, header row from the first cell's keys, one row per cell.
// Nested values are written as compact JSON.
std::string serialize_table(const ReportRecord& record);

// Deterministic JSON text of any document (floats at 17 significant digits).
std::string dump_json(const Json& value, int indent = 2);

}  // namespace weylscale
