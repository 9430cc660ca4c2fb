#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sglab/config.hpp"

namespace sglab {

enum class Status { Pass, Fail, Skipped };

std::string_view to_string(Status status);

struct Verdict {
  std::string name;
  Status status = Status::Skipped;
  std::string detail;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Everything a subcommand produced. `to_json` gives the report document;
/// timings are only included on request so that default output is
/// reproducible byte for byte.
struct RunReport {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::string config_hash;
  nlohmann::ordered_json samples = nlohmann::ordered_json::object();
  nlohmann::ordered_json fits = nlohmann::ordered_json::object();
  nlohmann::ordered_json projections = nlohmann::ordered_json::array();
  std::vector<Verdict> verdicts;
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  CsvTable csv;

  nlohmann::ordered_json to_json(bool include_timings = false) const;
  /// 0 when every verdict is PASS or SKIPPED, 1 otherwise.
  int exit_code() const;
};

inline constexpr const char* kLibraryVersion = "0.1.0";

RunReport run_simulate(const ExperimentConfig& config);
RunReport run_theorem_check(const ExperimentConfig& config);

struct HardyOptions {
  long cases = 10000;
  int max_len = 512;
  std::uint64_t seed = 42;
};

RunReport run_hardy(const HardyOptions& options);

struct WitnessOptions {
  std::vector<double> times{10.0, 20.0, 40.0, 80.0};
  Index dim = 0;  // 0: smallest adequate dimension for the largest time
};

RunReport run_witness(const WitnessOptions& options);

}  // namespace sglab
