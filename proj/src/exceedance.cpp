#include "noisescape/exceedance.hpp"

#include <map>

#include <fmt/format.h>

#include "noisescape/aggregate.hpp"

namespace noisescape {

std::optional<double> percent_2dp(std::int64_t count, std::int64_t total) {
  if (total <= 0) return std::nullopt;
  // hundredths of a percent, rounded half-up: floor((10000 * count + total / 2) / total)
  const std::int64_t hundredths = (20000 * count + total) / (2 * total);
  return static_cast<double>(hundredths) / 100.0;
}

namespace {

template <typename Fn>
void for_each_station(std::span<const HourlyMetrics> hourly, Fn&& fn) {
  std::size_t i = 0;
  while (i < hourly.size()) {
    std::size_t j = i;
    while (j < hourly.size() && hourly[j].station_id == hourly[i].station_id) ++j;
    fn(hourly.subspan(i, j - i));
    i = j;
  }
}

}  // namespace

ExceedanceReport exceedance_report(std::span<const HourlyMetrics> hourly, std::span<const std::string> station_ids,
                                   const PeriodSplit& split, double threshold_db) {
  std::map<std::string, ExceedanceRow, StationOrder> rows;
  for (const auto& id : station_ids) rows[id].station_id = id;

  for_each_station(hourly, [&](std::span<const HourlyMetrics> station) {
    auto& row = rows[station.front().station_id];
    row.station_id = station.front().station_id;
    for (const auto& h : station) {
      if (!split.contains(h.hour_start)) continue;
      const bool exceeds = h.avg.value() > threshold_db;
      if (period_of(h.hour_start, split) == Period::Pre) {
        ++row.pre_total;
        row.pre_count += exceeds;
      } else {
        ++row.during_total;
        row.during_count += exceeds;
      }
    }
  });

  ExceedanceReport report;
  for (auto& [id, row] : rows) {
    if (row.pre_total + row.during_total == 0) {
      report.warnings.push_back(fmt::format("station {} has no hourly data in the analysis window", id));
      continue;
    }
    row.pre_pct = percent_2dp(row.pre_count, row.pre_total);
    row.during_pct = percent_2dp(row.during_count, row.during_total);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<PeriodMeans> period_summary(std::span<const HourlyMetrics> hourly, const PeriodSplit& split) {
  std::map<std::string, PeriodMeans, StationOrder> out;
  for_each_station(hourly, [&](std::span<const HourlyMetrics> station) {
    std::vector<double> pre, during;
    for (const auto& h : station) {
      if (!split.contains(h.hour_start)) continue;
      (period_of(h.hour_start, split) == Period::Pre ? pre : during).push_back(h.avg.value());
    }
    PeriodMeans m;
    m.station_id = station.front().station_id;
    if (!pre.empty()) m.pre_avg = energy_average(pre);
    if (!during.empty()) m.during_avg = energy_average(during);
    out[m.station_id] = m;
  });
  std::vector<PeriodMeans> result;
  for (auto& [id, m] : out) result.push_back(std::move(m));
  return result;
}

}  // namespace noisescape
