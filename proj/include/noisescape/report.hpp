#pragma once

// End-to-end pipeline: ingest, aggregate, analyse and write a report bundle
// of CSV files plus manifest.json into one output directory.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noisescape/changepoint.hpp"
#include "noisescape/config.hpp"
#include "noisescape/diagnostics.hpp"
#include "noisescape/exceedance.hpp"
#include "noisescape/ingest.hpp"
#include "noisescape/spatial.hpp"
#include "noisescape/trend.hpp"

namespace noisescape {

enum class Step { Ingest, Aggregate, Trend, ChangePoint, Linearity, Exceedance, Spatial };

std::string_view to_string(Step step);

/// Steps a CLI subcommand runs, in order. Unknown names give an empty list.
std::vector<Step> steps_for(std::string_view subcommand);

struct InputPaths {
  std::string samples;  // empty = not supplied
  std::string stations;
  std::string traffic;
  std::string schools;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitAnalysisError = 2;

struct StationLinearity {
  std::string station_id;
  TimeBand band = TimeBand::Day;
  std::optional<LinearityDiagnostic> result;
  std::string error;
};

struct NoiseTrafficRow {
  std::string station_id;
  TimeBand band = TimeBand::Day;
  double mean_traffic = 0.0;
  double mean_noise = 0.0;  // energy mean of the band's pre-period hourly averages
  std::string group;        // "city-center" or "other"
};

struct NoiseTrafficFit {
  TimeBand band = TimeBand::Day;
  std::string group;  // "all", "city-center", "other"
  std::optional<FitSummary> fit;
};

struct PipelineResult {
  int exit_code = kExitOk;
  std::string failed_step;
  std::string error;
  std::vector<std::string> files;  // written, relative to the output directory

  IngestReport ingest;
  std::vector<Station> stations;
  std::vector<StationGaps> gaps;
  std::vector<HourlyMetrics> hourly;
  std::vector<BandDailySeries> band_series;  // station then band
  std::vector<TrendCell> trends;
  std::vector<StationChangePoint> changepoints;
  std::vector<StationLinearity> linearity;
  ExceedanceReport exceedance;
  std::vector<PeriodMeans> period_means;
  std::vector<StationTraffic> traffic;
  std::vector<SchoolCount> schools;
  std::vector<NoiseTrafficRow> noise_traffic;
  std::vector<NoiseTrafficFit> fits;
};

/// Runs `steps` (plus whatever they depend on) and writes the bundle to
/// `out_dir`, creating it if needed. A fatal error stops the run; the
/// manifest written so far names the failed step and exit_code is 1 for
/// input problems, 2 for analysis failures. Output is identical for
/// identical inputs.
PipelineResult run_pipeline(const AnalysisConfig& config, const InputPaths& inputs,
                            const std::filesystem::path& out_dir, const std::vector<Step>& steps);

}  // namespace noisescape
