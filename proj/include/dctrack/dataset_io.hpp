#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dctrack/event.hpp"

namespace dctrack {

/// Findings collected while reading a dataset; fatal only in strict mode.
struct ValidationReport {
  std::vector<std::string> issues;
  long rows_read = 0;
  bool ok() const { return issues.empty(); }
};

/// Canonical column order of the hit CSV schema.
const std::vector<std::string>& csvColumns();

/// Writes events as one hit row each, deterministic (event, layer, cell)
/// order, 9 significant digits. Returns the number of data rows.
long writeEvents(const std::vector<Event>& events, const std::string& path);
long writeEvents(const std::vector<Event>& events, std::ostream& out);

/// Reads a hit CSV back into events grouped by eventIndex. Truth tracks
/// are rebuilt from the track-level label columns. In strict mode any
/// validation finding throws SchemaError.
std::vector<Event> readEvents(const std::string& path, const Geometry& geometry,
                              ValidationReport& report, bool strict = false);

/// Formats a double the way the writer does (9 significant digits).
std::string formatValue(double v);

}  // namespace dctrack
