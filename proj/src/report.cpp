#include "sglab/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sglab/config.hpp"
#include "sglab/error.hpp"

namespace sglab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (!std::isnan(row[i])) out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    require(!ec, ErrorCode::Io, "cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    require(static_cast<bool>(out), ErrorCode::Io, "write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorCode::Io, "cannot move output into '" + path + "': " + ec.message());
  }
}

WrittenFiles write_outputs(const RunReport& report, const std::string& directory, bool csv, bool json_out,
                           bool include_timings) {
  WrittenFiles files;
  const fs::path dir(directory);
  if (json_out) {
    files.json = (dir / (report.command + ".json")).string();
    write_file_atomic(files.json, report.to_json(include_timings).dump(2) + "\n");
  }
  if (csv && !report.csv.header.empty()) {
    files.csv = (dir / (report.command + ".csv")).string();
    write_file_atomic(files.csv, to_csv(report.csv));
  }
  return files;
}

Rendered render_report(const std::string& json_text) {
  Rendered out;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    out.text = std::string("malformed report: ") + e.what() + "\n";
    return out;
  }
  if (!doc.is_object() || !doc.contains("verdicts") || !doc["verdicts"].is_array()) {
    out.text = "malformed report: no verdict list\n";
    return out;
  }
  std::ostringstream os;
  os << "command: " << doc.value("command", std::string("?")) << "\n";
  if (doc.contains("version") && doc["version"].is_object()) {
    os << "library " << doc["version"].value("library", std::string("?")) << ", config hash "
       << doc["version"].value("config_hash", std::string("?")) << "\n";
  }
  if (doc.contains("fits") && doc["fits"].is_object()) {
    for (const auto& [name, fit] : doc["fits"].items()) {
      if (!fit.is_object() || !fit.contains("coefficient")) continue;
      os << "fit " << name << ": coefficient " << fit["coefficient"].dump() << ", exponent "
         << fit["exponent"].dump() << ", spread " << fit["spread"].dump() << "\n";
    }
  }
  bool any_fail = false;
  for (const auto& v : doc["verdicts"]) {
    if (!v.is_object() || !v.contains("status") || !v["status"].is_string()) {
      out.text = "malformed report: verdict without status\n";
      return out;
    }
    const std::string status = v["status"].get<std::string>();
    if (status != "PASS" && status != "FAIL" && status != "SKIPPED") {
      out.text = "malformed report: unknown status '" + status + "'\n";
      return out;
    }
    any_fail = any_fail || status == "FAIL";
    os << status << " " << v.value("name", std::string("?")) << ": " << v.value("detail", std::string()) << "\n";
  }
  out.text = os.str();
  out.exit_code = any_fail ? 1 : 0;
  return out;
}

Rendered render_report_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Rendered{"cannot read report '" + path + "'\n", 2};
  std::stringstream ss;
  ss << in.rdbuf();
  return render_report(ss.str());
}

}  // namespace sglab
