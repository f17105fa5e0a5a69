// noisescape: command-line front end for the noise analysis pipeline.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "noisescape/config.hpp"
#include "noisescape/errors.hpp"
#include "noisescape/report.hpp"
#include "noisescape/synthgen.hpp"

namespace fs = std::filesystem;
using namespace noisescape;

namespace {

struct Options {
  std::string config;
  InputPaths inputs;
  std::string out = "noisescape-out";
};

constexpr const char* kAnalysisCommands[][2] = {
    {"ingest-check", "Validate samples and report flagged rows and 5-minute gaps"},
    {"aggregate", "Hourly metrics, band-daily series and percentile summaries"},
    {"trend", "OLS slope per station, band and metric with a two-sided t test"},
    {"changepoint", "Penalised-likelihood change point per station"},
    {"linearity", "Cross-correlation linearity diagnostic per station and band"},
    {"exceedance", "Hours above the threshold per period and pre/during means"},
    {"spatial", "Traffic and school counts within the radius, noise-traffic fits"},
    {"report", "Full pipeline: every step above into one bundle"},
};

void add_io_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Analysis config file (key = value); built-in defaults when omitted")
      ->check(CLI::ExistingFile);
  cmd->add_option("--samples", o.inputs.samples, "samples.csv: station_id,timestamp,leq_db,lmax_db");
  cmd->add_option("--stations", o.inputs.stations, "stations.csv: station_id,name,lat,lon (or lon_w, degrees west)");
  cmd->add_option("--traffic", o.inputs.traffic, "traffic.csv: lat,lon,night_count,day_count,evening_count");
  cmd->add_option("--schools", o.inputs.schools, "schools.csv: name,lat,lon");
  cmd->add_option("--out", o.out, "Output directory for the report bundle")->capture_default_str();
}

int run_analysis(const std::string& command, const Options& o) {
  AnalysisConfig config;
  try {
    if (!o.config.empty()) config = load_config(o.config);
  } catch (const InputError& e) {
    std::cerr << "noisescape: " << e.what() << '\n';
    return kExitInputError;
  }
  auto result = run_pipeline(config, o.inputs, o.out, steps_for(command));
  for (const auto& f : result.files) std::cout << (fs::path(o.out) / f).string() << '\n';
  std::cout << (fs::path(o.out) / "manifest.json").string() << '\n';
  if (result.exit_code != kExitOk)
    std::cerr << fmt::format("noisescape: step '{}' failed: {}\n", result.failed_step, result.error);
  else if (command == "ingest-check")
    std::cerr << fmt::format("{} rows read, {} accepted, {} flagged\n", result.ingest.rows_read,
                             result.ingest.rows_accepted, result.ingest.rows_flagged());
  return result.exit_code;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
}

int run_synth(const std::string& spec_path, bool golden, std::uint64_t seed, const std::string& out_dir) {
  try {
    ScenarioSpec spec;
    if (golden)
      spec = golden_scenario(seed);
    else if (!spec_path.empty())
      spec = load_scenario(spec_path);
    else
      throw InputError("synth needs --spec <scenario file> or --golden");

    auto out = generate(spec);
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "samples.csv", out.samples_csv);
    if (!out.stations_csv.empty()) write_text(fs::path(out_dir) / "stations.csv", out.stations_csv);
    write_text(fs::path(out_dir) / "truth.json", out.truth_json());
    write_text(fs::path(out_dir) / "scenario.ini", to_text(spec));
    std::cout << fs::path(out_dir).string() << '\n';
    return kExitOk;
  } catch (const InputError& e) {
    std::cerr << "noisescape: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "noisescape: " << e.what() << '\n';
    return kExitAnalysisError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisescape: urban noise monitoring analysis (hourly energy averages, trends, change points,\n"
               "linearity checks, threshold exceedance and traffic joins)"};
  app.require_subcommand(1);
  app.footer("\nExit codes: 0 success, 1 input error, 2 analysis error.\n\n" + config_help());

  Options opts;
  std::string chosen;
  for (const auto& [name, help] : kAnalysisCommands) {
    auto* cmd = app.add_subcommand(name, help);
    add_io_flags(cmd, opts);
    cmd->callback([&chosen, n = std::string(name)] { chosen = n; });
  }

  std::string spec_path, synth_out = "synth-out";
  bool golden = false;
  std::uint64_t seed = 20200325;
  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic data set with its ground truth");
  synth->add_option("--spec", spec_path, "Scenario file (INI: global keys plus [station:<id>] sections)")
      ->check(CLI::ExistingFile);
  synth->add_flag("--golden", golden, "Use the built-in 12-station scenario instead of --spec");
  synth->add_option("--seed", seed, "Seed for --golden")->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
  synth->callback([&chosen] { chosen = "synth"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (chosen == "synth") return run_synth(spec_path, golden, seed, synth_out);
  return run_analysis(chosen, opts);
}
