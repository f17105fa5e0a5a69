#pragma once

// Analysis configuration: plain-text "key = value" lines, '#' or ';'
// comments. Every key is optional; omitted keys keep their defaults.

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "noisescape/aggregate.hpp"
#include "noisescape/changepoint.hpp"
#include "noisescape/diagnostics.hpp"
#include "noisescape/exceedance.hpp"
#include "noisescape/model.hpp"
#include "noisescape/spatial.hpp"
#include "noisescape/trend.hpp"

namespace noisescape {

enum class TrendGranularity { BandDaily, Hourly };

struct AnalysisConfig {
  PeriodSplit split = PeriodSplit::lockdown_2020();
  double threshold_db = kWhoThresholdDb;
  double radius_m = kDefaultRadiusM;
  BandBoundaries bands;
  std::size_t max_lag = kDefaultMaxLag;
  LinearityMode linearity_mode = LinearityMode::Strict;
  double alpha = kDefaultAlpha;
  ChangePointParams changepoint;
  ChangePointMode changepoint_mode = ChangePointMode::Single;
  CoverageMode coverage_mode = CoverageMode::Inclusive;
  TrendGranularity trend_granularity = TrendGranularity::BandDaily;
  std::vector<std::string> city_center_stations;  // group label for the traffic fits

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// Throws InputError on unknown keys, unparseable values or values that
/// violate an invariant (e.g. a split outside the window).
AnalysisConfig parse_config(std::istream& in);
AnalysisConfig load_config(const std::string& path);

/// Serialises every field; parse_config(to_text(c)) == c.
std::string to_text(const AnalysisConfig& config);

/// Key reference with defaults and where each default comes from.
std::string config_help();

std::string_view to_string(TrendGranularity granularity);

}  // namespace noisescape
