#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sglab/config.hpp"
#include "sglab/error.hpp"
#include "sglab/experiment.hpp"
#include "sglab/report.hpp"

namespace {

struct Common {
  std::string out;
  bool timings = false;
};

int finish(const sglab::RunReport& report, const std::string& dir, bool csv, bool json, bool timings) {
  const auto files = sglab::write_outputs(report, dir, csv, json, timings);
  for (const auto& v : report.verdicts) {
    std::cout << sglab::to_string(v.status) << " " << v.name << ": " << v.detail << "\n";
  }
  if (!files.json.empty()) std::cout << "wrote " << files.json << "\n";
  if (!files.csv.empty()) std::cout << "wrote " << files.csv << "\n";
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on bounded semigroups and their resolvent decay rates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sglab::kLibraryVersion);

  std::string config_path;
  Common common;
  std::optional<long> max_dim;
  auto add_config_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory (overrides output.directory)");
    sub->add_option("--max-dim", max_dim, "largest truncation dimension allowed")->check(CLI::PositiveNumber);
    sub->add_flag("--timings", common.timings, "include wall-clock timings in the JSON report");
  };

  auto* simulate = app.add_subcommand("simulate", "sample ||T(t)||, ||T(t)R(mu)|| and their ratio");
  add_config_flags(simulate);
  auto* theorem = app.add_subcommand("theorem-check", "check the envelope, projection and decay conditions");
  add_config_flags(theorem);

  sglab::HardyOptions hardy_opts;
  std::string hardy_out = "out";
  bool hardy_timings = false;
  auto* hardy = app.add_subcommand("hardy", "random search against the discrete Hardy inequality");
  hardy->add_option("--cases", hardy_opts.cases, "number of random sequences")->capture_default_str();
  hardy->add_option("--max-len", hardy_opts.max_len, "longest sequence length")->capture_default_str();
  hardy->add_option("--seed", hardy_opts.seed, "generator seed")->capture_default_str();
  hardy->add_option("--out", hardy_out, "output directory")->capture_default_str();
  hardy->add_flag("--timings", hardy_timings, "include wall-clock timings in the JSON report");

  sglab::WitnessOptions witness_opts;
  std::string witness_out = "out";
  bool witness_timings = false;
  auto* witness = app.add_subcommand("witness", "explicit lower bound for the logarithmic spectrum model");
  witness->add_option("--t", witness_opts.times, "times, increasing and above e")->delimiter(',')->capture_default_str();
  witness->add_option("--dim", witness_opts.dim, "truncation dimension (default ceil(8 t_max))");
  witness->add_option("--out", witness_out, "output directory")->capture_default_str();
  witness->add_flag("--timings", witness_timings, "include wall-clock timings in the JSON report");

  std::string report_path;
  auto* report = app.add_subcommand("report", "summarize a JSON report and exit with its verdict");
  report->add_option("path", report_path, "report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate || *theorem) {
      auto config = sglab::load_config(config_path, max_dim ? std::optional<sglab::Index>(*max_dim) : std::nullopt);
      if (!common.out.empty()) config.output.directory = common.out;
      const auto result = *simulate ? sglab::run_simulate(config) : sglab::run_theorem_check(config);
      return finish(result, config.output.directory, config.output.csv, config.output.json, common.timings);
    }
    if (*hardy) return finish(sglab::run_hardy(hardy_opts), hardy_out, false, true, hardy_timings);
    if (*witness) return finish(sglab::run_witness(witness_opts), witness_out, true, true, witness_timings);
    if (*report) {
      const auto r = sglab::render_report_file(report_path);
      (r.exit_code == 2 ? std::cerr : std::cout) << r.text;
      return r.exit_code;
    }
  } catch (const sglab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
