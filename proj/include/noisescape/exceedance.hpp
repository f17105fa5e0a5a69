#pragma once

// Threshold exceedance counts per period and the pre/during energy means.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisescape/model.hpp"

namespace noisescape {

inline constexpr double kWhoThresholdDb = 55.0;

/// 100 * count / total rounded half-up to two decimals, computed in integer
/// arithmetic. nullopt when total is zero.
std::optional<double> percent_2dp(std::int64_t count, std::int64_t total);

struct ExceedanceRow {
  std::string station_id;
  std::int64_t pre_count = 0;
  std::int64_t during_count = 0;
  std::int64_t pre_total = 0;  // hours with data, not calendar hours
  std::int64_t during_total = 0;
  std::optional<double> pre_pct;
  std::optional<double> during_pct;
};

struct ExceedanceReport {
  std::vector<ExceedanceRow> rows;
  std::vector<std::string> warnings;
};

/// An hour exceeds when its average is strictly above `threshold_db`.
/// `hourly` is sorted by station; hours outside the window are ignored.
/// Stations listed in `station_ids` with no in-window data are omitted with
/// a warning.
ExceedanceReport exceedance_report(std::span<const HourlyMetrics> hourly, std::span<const std::string> station_ids,
                                   const PeriodSplit& split, double threshold_db = kWhoThresholdDb);

struct PeriodMeans {
  std::string station_id;
  std::optional<double> pre_avg;  // energy average of the period's hourly averages
  std::optional<double> during_avg;

  std::optional<double> reduction() const {
    if (!pre_avg || !during_avg) return std::nullopt;
    return *pre_avg - *during_avg;
  }
};

/// One row per station present in `hourly`; empty periods stay unset.
std::vector<PeriodMeans> period_summary(std::span<const HourlyMetrics> hourly, const PeriodSplit& split);

}  // namespace noisescape
