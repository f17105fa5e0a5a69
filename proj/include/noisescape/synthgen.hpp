#pragma once

// Seeded synthetic 5-minute sound-level records with known ground truth.
//
// Each station's L_eq at slot time t is
//
//   base + band_offset[band_of(t)] + drift * days_since_start + (t >= step_at ? step : 0) + sd * z
//
// and L_max = L_eq + lmax_excess + sd * |z'|, both quantised to 0.1 dB. A
// slot is dropped with probability missing_prob.
//
// Randomness: std::mt19937_64 (whose output sequence the C++ standard fixes)
// seeded per station with splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15).
// Uniforms take the top 53 bits; normals use the Box-Muller cosine branch.
// std::*_distribution is avoided because its output is library-specific.

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "noisescape/model.hpp"

namespace noisescape {

struct StationScenario {
  std::string id;
  std::string name;
  std::optional<GeoPoint> location;
  double base_db = 60.0;
  std::array<double, 3> band_offset_db{};  // indexed by TimeBand
  double drift_db_per_day = 0.0;
  std::optional<LocalTime> step_at;
  double step_db = 0.0;
  double noise_sd_db = 0.0;
  double missing_prob = 0.0;
  double lmax_excess_db = 6.0;
};

struct ScenarioSpec {
  std::uint64_t seed = 1;
  PeriodSplit window = PeriodSplit::lockdown_2020();
  double threshold_db = 55.0;  // used only for the ground-truth exceedance figures
  BandBoundaries bands;
  std::vector<StationScenario> stations;
};

/// INI-style text: global keys, then one "[station:<id>]" section per station.
ScenarioSpec parse_scenario(std::istream& in);
ScenarioSpec load_scenario(const std::string& path);
std::string to_text(const ScenarioSpec& spec);

/// Twelve stations with the names and coordinates of the Dublin network and
/// one step each: seven between 14 and 17 March 2020, five between 19 and
/// 29 March 2020. Levels keep every band at least 1 dB away from 55 dB so
/// the exceedance truth is unambiguous, and each night offset stays within
/// 0.36 steps of the daily mean so the hours either side of a midnight step
/// fall on the right side of it.
ScenarioSpec golden_scenario(std::uint64_t seed = 20200325);

struct StationTruth {
  std::string station_id;
  std::optional<LocalTime> step_at;
  double step_db = 0.0;
  double drift_db_per_day = 0.0;
  /// OLS slope (dB/day) of the noise-free band-daily series, [band][metric],
  /// metric order avg, max, min.
  std::array<std::array<std::optional<double>, 3>, 3> band_slope{};
  /// Energy mean of the noise-free hourly levels, [band][period].
  std::array<std::array<std::optional<double>, 2>, 3> band_mean{};
  /// Share (percent, unrounded) of data-present hours whose noise-free level
  /// exceeds the scenario threshold, per period.
  std::array<std::optional<double>, 2> exceedance_pct{};
  std::int64_t present_samples = 0;
};

struct SynthOutput {
  std::string samples_csv;
  std::string stations_csv;  // empty unless every station has a location
  std::vector<StationTruth> truth;

  std::string truth_json() const;
};

SynthOutput generate(const ScenarioSpec& spec);

}  // namespace noisescape
