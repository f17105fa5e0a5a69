#include "noisescape/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "noisescape/errors.hpp"

namespace noisescape {

double energy_average(std::span<const double> levels_db) {
  if (levels_db.empty()) throw UndefinedInput("energy average of an empty sequence");
  auto [lo, hi] = std::minmax_element(levels_db.begin(), levels_db.end());
  // Factor out the loudest level so 10^(L/10) cannot overflow.
  const double ref = *hi;
  double sum = 0.0;
  for (double l : levels_db) sum += std::pow(10.0, (l - ref) / 10.0);
  double avg = ref + 10.0 * std::log10(sum / static_cast<double>(levels_db.size()));
  return std::clamp(avg, *lo, *hi);
}

Decibel energy_average(std::span<const Decibel> levels) {
  std::vector<double> raw(levels.size());
  std::transform(levels.begin(), levels.end(), raw.begin(), [](Decibel d) { return d.value(); });
  return Decibel{energy_average(raw)};
}

std::optional<HourlyMetrics> hourly_aggregate(std::span<const NoiseSample> samples) {
  if (samples.empty()) return std::nullopt;
  const auto& first = samples.front();
  HourlyMetrics m;
  m.station_id = first.station_id;
  m.hour_start = hour_floor(first.timestamp);
  m.max = first.lmax;
  m.min = first.leq;
  std::vector<double> leq;
  leq.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.station_id != m.station_id || hour_floor(s.timestamp) != m.hour_start)
      throw std::invalid_argument("hourly_aggregate: samples span more than one station-hour");
    leq.push_back(s.leq.value());
    m.max = std::max(m.max, s.lmax);
    m.min = std::min(m.min, s.leq);
  }
  m.avg = Decibel{energy_average(leq)};
  m.n_samples = static_cast<int>(samples.size());
  return m;
}

std::string_view to_string(CoverageMode mode) { return mode == CoverageMode::Strict ? "strict" : "inclusive"; }

std::optional<CoverageMode> parse_coverage_mode(std::string_view text) {
  if (text == "inclusive") return CoverageMode::Inclusive;
  if (text == "strict") return CoverageMode::Strict;
  return std::nullopt;
}

std::vector<HourlyMetrics> hourly_series(std::span<const NoiseSample> samples, CoverageMode mode) {
  std::vector<HourlyMetrics> out;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i + 1;
    const auto hour = hour_floor(samples[i].timestamp);
    while (j < samples.size() && samples[j].station_id == samples[i].station_id &&
           hour_floor(samples[j].timestamp) == hour)
      ++j;
    auto m = hourly_aggregate(samples.subspan(i, j - i));
    if (mode == CoverageMode::Inclusive || !m->low_coverage()) out.push_back(std::move(*m));
    i = j;
  }
  return out;
}

BandDailySeries build_band_series(std::span<const HourlyMetrics> hourly, TimeBand band, const BandBoundaries& bounds) {
  BandDailySeries series;
  series.band = band;
  if (!hourly.empty()) series.station_id = hourly.front().station_id;

  std::vector<double> avgs;
  auto flush = [&](BandDayEntry& e) {
    if (e.n_hours == 0) return;
    e.avg = Decibel{energy_average(avgs)};
    series.entries.push_back(e);
    avgs.clear();
  };

  BandDayEntry current;
  for (const auto& h : hourly) {
    if (band_of(h.hour_start, bounds) != band) continue;
    LocalDate d = band_date(h.hour_start, bounds);
    if (current.n_hours > 0 && d != current.date) {
      flush(current);
      current = {};
    }
    if (current.n_hours == 0) {
      current.date = d;
      current.max = h.max;
      current.min = h.min;
    }
    avgs.push_back(h.avg.value());
    current.max = std::max(current.max, h.max);
    current.min = std::min(current.min, h.min);
    ++current.n_hours;
  }
  flush(current);
  return series;
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw UndefinedInput("percentile of an empty sequence");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile rank must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

PercentileSummary percentile_summary(std::span<const double> values) {
  if (values.empty()) throw UndefinedInput("percentile summary of an empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {percentile(sorted, 0.05), percentile(sorted, 0.25), percentile(sorted, 0.50), percentile(sorted, 0.75),
          percentile(sorted, 0.95)};
}

}  // namespace noisescape
