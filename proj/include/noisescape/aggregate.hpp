#pragma once

// Energy-based averaging of sound levels and the hourly / band-daily
// aggregation built on it.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisescape/model.hpp"

namespace noisescape {

/// Level carrying the same acoustic energy as the inputs:
///   10 * log10( (sum_i 10^(L_i / 10)) / n )
/// The result lies in [min(levels), max(levels)]. Throws UndefinedInput when
/// `levels_db` is empty.
double energy_average(std::span<const double> levels_db);
Decibel energy_average(std::span<const Decibel> levels);

/// Metrics for one station-hour. All samples must share station and clock
/// hour (std::invalid_argument otherwise). An empty span is a missing hour
/// and yields nullopt, never zeros.
std::optional<HourlyMetrics> hourly_aggregate(std::span<const NoiseSample> samples);

enum class CoverageMode {
  Inclusive,  // low-coverage hours are kept (and marked via low_coverage())
  Strict,     // hours with fewer than kLowCoverageSamples samples are dropped
};

std::string_view to_string(CoverageMode mode);
std::optional<CoverageMode> parse_coverage_mode(std::string_view text);

/// Hourly metrics for every station-hour that has data. `samples` must be
/// sorted by (station, time); the result follows the same order.
std::vector<HourlyMetrics> hourly_series(std::span<const NoiseSample> samples,
                                         CoverageMode mode = CoverageMode::Inclusive);

struct BandDayEntry {
  LocalDate date;
  Decibel avg;  // energy average of the band's hourly averages
  Decibel max;  // largest hourly maximum in the band
  Decibel min;  // smallest hourly minimum in the band
  int n_hours = 0;
};

struct BandDailySeries {
  std::string station_id;
  TimeBand band = TimeBand::Day;
  std::vector<BandDayEntry> entries;
};

/// Collapses one station's hourly metrics into one entry per civil date for
/// `band`. A night starting at 23:00 on D is attributed to D. Dates without
/// any in-band hour are omitted.
BandDailySeries build_band_series(std::span<const HourlyMetrics> hourly, TimeBand band,
                                  const BandBoundaries& bounds = {});

struct PercentileSummary {
  double p5 = 0, p25 = 0, p50 = 0, p75 = 0, p95 = 0;
};

/// Percentile with linear interpolation between closest ranks:
/// h = (n - 1) * q, result = x[floor h] + (h - floor h) * (x[floor h + 1] - x[floor h]),
/// over the sorted values. This is the "type 7" estimator.
double percentile(std::span<const double> values, double q);

/// 5th/25th/50th/75th/95th percentiles. Throws UndefinedInput when empty.
PercentileSummary percentile_summary(std::span<const double> values);

}  // namespace noisescape
