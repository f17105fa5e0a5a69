#pragma once

// Ordinary least squares trend y = b0 + b1 * t with a two-sided Student-t
// test on the slope.

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noisescape/aggregate.hpp"
#include "noisescape/model.hpp"

namespace noisescape {

inline constexpr double kDefaultAlpha = 0.05;

struct TrendResult {
  double slope = 0.0;      // dB per time step
  double intercept = 0.0;  // dB at t = 0
  double slope_se = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;  // two-sided, n - 2 degrees of freedom
  bool significant = false;
  bool exact_fit = false;  // residuals vanish; p is 0 for a non-zero slope, 1 for a flat line
  std::size_t n = 0;
  double rss = 0.0;
  double tss = 0.0;

  double r_squared() const { return tss > 0.0 ? std::max(0.0, std::min(1.0, 1.0 - rss / tss)) : 0.0; }
};

/// Fits y against t. Requires y.size() == t.size() >= 3 (InsufficientData)
/// and t not constant (DegenerateDesign). significant <=> p_value < alpha.
TrendResult ols_fit(std::span<const double> y, std::span<const double> t, double alpha = kDefaultAlpha);

enum class Metric { Avg, Max, Min };

inline constexpr std::array<Metric, 3> kAllMetrics{Metric::Avg, Metric::Max, Metric::Min};

std::string_view to_string(Metric metric);

struct TrendCell {
  std::string station_id;
  TimeBand band = TimeBand::Day;
  Metric metric = Metric::Avg;
  std::optional<TrendResult> result;  // empty when the cell could not be fitted
  std::string unavailable_reason;

  /// Negative slopes mean the noise decreased over time.
  bool decreasing() const { return result && result->slope < 0.0; }
};

/// One cell per (series, metric): for each band-daily series the avg, max
/// and min columns are regressed on days elapsed since `origin`, so slopes
/// are in dB per day. Cells that cannot be fitted are kept and marked.
std::vector<TrendCell> band_trends(std::span<const BandDailySeries> series, LocalDate origin,
                                   double alpha = kDefaultAlpha);

/// Hourly-granularity alternative: for every station and band, the in-band
/// hourly avg/max/min values are regressed on hours elapsed since `origin`
/// (slopes in dB per hour). `hourly` may hold several stations, sorted.
std::vector<TrendCell> hourly_band_trends(std::span<const HourlyMetrics> hourly, LocalTime origin,
                                          const BandBoundaries& bounds = {}, double alpha = kDefaultAlpha);

}  // namespace noisescape
