#include "noisescape/trend.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "noisescape/errors.hpp"
#include "noisescape/student_t.hpp"

namespace noisescape {

TrendResult ols_fit(std::span<const double> y, std::span<const double> t, double alpha) {
  if (y.size() != t.size()) throw std::invalid_argument("ols_fit: y and t differ in length");
  const std::size_t n = y.size();
  if (n < 3) throw InsufficientData(fmt::format("ols_fit needs at least 3 points, got {}", n));

  double t_mean = 0.0, y_mean = 0.0, y_abs_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t_mean += t[i];
    y_mean += y[i];
    y_abs_max = std::max(y_abs_max, std::fabs(y[i]));
  }
  t_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = t[i] - t_mean;
    const double dy = y[i] - y_mean;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (!(stt > 0.0)) throw DegenerateDesign("ols_fit: time indices are all identical");

  TrendResult r;
  r.n = n;
  r.slope = sty / stt;
  r.intercept = y_mean - r.slope * t_mean;
  r.tss = syy;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - r.intercept - r.slope * t[i];
    r.rss += e * e;
  }

  // Residual RMS below 1e-10 of the data scale is treated as a perfect fit.
  const double tol = 1e-10 * (1.0 + y_abs_max);
  const double dof = static_cast<double>(n - 2);
  if (syy == 0.0 || r.rss <= static_cast<double>(n) * tol * tol) {
    r.exact_fit = true;
    r.slope_se = 0.0;
    const double t_range = std::sqrt(stt);
    if (std::fabs(r.slope) * t_range <= tol) {
      r.t_stat = 0.0;
      r.p_value = 1.0;
    } else {
      r.t_stat = std::copysign(std::numeric_limits<double>::infinity(), r.slope);
      r.p_value = 0.0;
    }
  } else {
    r.slope_se = std::sqrt(r.rss / dof / stt);
    r.t_stat = r.slope / r.slope_se;
    r.p_value = student_t_two_sided_p(r.t_stat, dof);
  }
  r.significant = r.p_value < alpha;
  return r;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Avg:
      return "avg";
    case Metric::Max:
      return "max";
    case Metric::Min:
      return "min";
  }
  return "?";
}

namespace {

template <typename Record>
double metric_of(const Record& r, Metric metric) {
  switch (metric) {
    case Metric::Avg:
      return r.avg.value();
    case Metric::Max:
      return r.max.value();
    case Metric::Min:
      return r.min.value();
  }
  return 0.0;
}

TrendCell fit_cell(std::string station, TimeBand band, Metric metric, std::span<const double> y,
                   std::span<const double> t, double alpha) {
  TrendCell cell{std::move(station), band, metric, std::nullopt, {}};
  try {
    cell.result = ols_fit(y, t, alpha);
  } catch (const std::invalid_argument& e) {
    cell.unavailable_reason = e.what();
  }
  return cell;
}

}  // namespace

std::vector<TrendCell> band_trends(std::span<const BandDailySeries> series, LocalDate origin, double alpha) {
  std::vector<TrendCell> cells;
  cells.reserve(series.size() * kAllMetrics.size());
  for (const auto& s : series) {
    std::vector<double> t;
    t.reserve(s.entries.size());
    for (const auto& e : s.entries) t.push_back(static_cast<double>((e.date - origin).count()));
    for (Metric metric : kAllMetrics) {
      std::vector<double> y;
      y.reserve(s.entries.size());
      for (const auto& e : s.entries) y.push_back(metric_of(e, metric));
      cells.push_back(fit_cell(s.station_id, s.band, metric, y, t, alpha));
    }
  }
  return cells;
}

std::vector<TrendCell> hourly_band_trends(std::span<const HourlyMetrics> hourly, LocalTime origin,
                                          const BandBoundaries& bounds, double alpha) {
  std::vector<TrendCell> cells;
  std::size_t i = 0;
  while (i < hourly.size()) {
    std::size_t j = i;
    while (j < hourly.size() && hourly[j].station_id == hourly[i].station_id) ++j;
    auto station = hourly.subspan(i, j - i);
    for (TimeBand band : kAllBands) {
      std::vector<const HourlyMetrics*> in_band;
      for (const auto& h : station)
        if (band_of(h.hour_start, bounds) == band) in_band.push_back(&h);
      std::vector<double> t;
      for (const auto* h : in_band)
        t.push_back(static_cast<double>(std::chrono::floor<std::chrono::hours>(h->hour_start - origin).count()));
      for (Metric metric : kAllMetrics) {
        std::vector<double> y;
        for (const auto* h : in_band) y.push_back(metric_of(*h, metric));
        cells.push_back(fit_cell(station.front().station_id, band, metric, y, t, alpha));
      }
    }
    i = j;
  }
  return cells;
}

}  // namespace noisescape
