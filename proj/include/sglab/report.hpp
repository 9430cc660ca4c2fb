#pragma once

#include <string>

#include "sglab/experiment.hpp"

namespace sglab {

/// CSV text: header line, then one row per sample with shortest round-trip
/// floats. NaN cells are written empty.
std::string to_csv(const CsvTable& table);

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);

struct WrittenFiles {
  std::string json;
  std::string csv;
};

/// Writes <dir>/<command>.json and/or <dir>/<command>.csv.
WrittenFiles write_outputs(const RunReport& report, const std::string& directory, bool csv, bool json,
                           bool include_timings);

struct Rendered {
  std::string text;
  int exit_code = 2;
};

/// Human summary of a JSON report. Exit code 0 when every verdict is PASS or
/// SKIPPED, 1 when any is FAIL, 2 when the document is unreadable.
Rendered render_report(const std::string& json_text);
Rendered render_report_file(const std::string& path);

}  // namespace sglab
