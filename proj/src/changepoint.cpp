#include "noisescape/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "noisescape/errors.hpp"

namespace noisescape {

SegmentStats::SegmentStats(std::span<const double> y) : sum_(y.size() + 1, 0.0), sum_sq_(y.size() + 1, 0.0) {
  if (!y.empty()) {
    double total = 0.0;
    for (double v : y) total += v;
    offset_ = total / static_cast<double>(y.size());
  }
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double v = y[k] - offset_;
    sum_[k + 1] = sum_[k] + v;
    sum_sq_[k + 1] = sum_sq_[k] + v * v;
  }
}

double SegmentStats::mean(std::size_t first, std::size_t last) const {
  const double m = static_cast<double>(last - first + 1);
  return offset_ + (sum_[last + 1] - sum_[first]) / m;
}

double SegmentStats::mle_variance(std::size_t first, std::size_t last) const {
  const double m = static_cast<double>(last - first + 1);
  const double s1 = sum_[last + 1] - sum_[first];
  const double s2 = sum_sq_[last + 1] - sum_sq_[first];
  return std::max(0.0, (s2 - s1 * s1 / m) / m);
}

double gaussian_cost(const SegmentStats& stats, std::size_t first, std::size_t last, const ChangePointParams& params) {
  if (last < first || last >= stats.size() || last - first + 1 < params.min_segment_length)
    throw std::invalid_argument(fmt::format("segment [{}, {}] is shorter than the minimum length {} or out of range",
                                            first, last, params.min_segment_length));
  const double m = static_cast<double>(last - first + 1);
  const double var = std::max(stats.mle_variance(first, last), params.variance_floor);
  return 0.5 * m * (std::log(2.0 * std::numbers::pi) + std::log(var) + 1.0);
}

double bic_penalty(std::size_t n, const ChangePointParams& params) {
  return params.params_per_change * std::log(static_cast<double>(n));
}

namespace {

void require_length(std::size_t n, const ChangePointParams& params) {
  if (params.min_segment_length == 0) throw std::invalid_argument("min_segment_length must be at least 1");
  if (n < 2 * params.min_segment_length)
    throw InsufficientData(fmt::format("change-point detection needs at least {} points, got {}",
                                       2 * params.min_segment_length, n));
}

}  // namespace

ChangePointResult detect_single(std::span<const double> y, const ChangePointParams& params) {
  const std::size_t n = y.size();
  require_length(n, params);
  SegmentStats stats(y);
  const std::size_t minseg = params.min_segment_length;

  ChangePointResult r;
  r.penalty = bic_penalty(n, params);
  r.cost_unsplit = gaussian_cost(stats, 0, n - 1, params);
  r.best_objective = std::numeric_limits<double>::infinity();
  r.curve.reserve(n - 2 * minseg + 1);
  for (std::size_t tau = minseg; tau + minseg <= n; ++tau) {
    const double left = gaussian_cost(stats, 0, tau - 1, params);
    const double right = gaussian_cost(stats, tau, n - 1, params);
    const double objective = left + right + r.penalty;
    r.curve.push_back({tau, objective});
    if (r.curve.size() == 1 || objective < r.best_objective - kTieTolerance * std::max(1.0, std::fabs(r.best_objective))) {
      r.best_objective = objective;
      r.best_tau = tau;
      r.cost_left = left;
      r.cost_right = right;
    }
  }
  if (r.best_objective < r.cost_unsplit) {
    r.verdict = Verdict::Change;
    r.tau = r.best_tau;
  }
  return r;
}

MultipleChangeResult detect_multiple(std::span<const double> y, const ChangePointParams& params) {
  const std::size_t n = y.size();
  require_length(n, params);
  SegmentStats stats(y);
  const std::size_t minseg = params.min_segment_length;
  const double beta = bic_penalty(n, params);
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t never = std::numeric_limits<std::size_t>::max();

  // best[t]: optimal penalised cost of y[0..t), with best[0] = -beta so that
  // a single segment pays no penalty.
  std::vector<double> best(n + 1, inf);
  std::vector<std::size_t> last_change(n + 1, 0);
  best[0] = -beta;

  struct Candidate {
    std::size_t s;
    std::size_t drop_at;  // first t at which the candidate is no longer considered
  };
  std::vector<Candidate> candidates{{0, never}};
  std::vector<double> scratch;

  for (std::size_t t = minseg; t <= n; ++t) {
    std::erase_if(candidates, [t](const Candidate& c) { return c.drop_at <= t; });

    scratch.assign(candidates.size(), inf);
    double f = inf;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const std::size_t s = candidates[k].s;
      if (t - s < minseg) continue;
      scratch[k] = best[s] + gaussian_cost(stats, s, t - 1, params);
      if (scratch[k] + beta < f) {
        f = scratch[k] + beta;
        arg = s;
      }
    }
    best[t] = f;
    last_change[t] = arg;

    // A candidate beaten at t can only be beaten through t once a full
    // segment fits after t, so removal is deferred by min_segment_length.
    // Candidates too recent to close a segment at t were not evaluated.
    for (std::size_t k = 0; k < candidates.size(); ++k)
      if (t - candidates[k].s >= minseg && scratch[k] > f && candidates[k].drop_at == never)
        candidates[k].drop_at = t + minseg;

    if (t + minseg <= n) candidates.push_back({t, never});
  }

  MultipleChangeResult result;
  result.objective = best[n];
  for (std::size_t t = last_change[n]; t > 0; t = last_change[t]) result.change_points.push_back(t);
  std::reverse(result.change_points.begin(), result.change_points.end());
  return result;
}

std::string_view to_string(ChangePointMode mode) { return mode == ChangePointMode::Single ? "single" : "multiple"; }

namespace {

StationChangePoint detect_station(std::span<const HourlyMetrics> hours, const ChangePointParams& params,
                                  ChangePointMode mode) {
  StationChangePoint out;
  out.station_id = hours.front().station_id;
  out.n_hours = hours.size();
  out.series_start = hours.front().hour_start;
  std::vector<double> y;
  y.reserve(hours.size());
  for (const auto& h : hours) y.push_back(h.avg.value());
  try {
    if (mode == ChangePointMode::Single) {
      out.single = detect_single(y, params);
      if (out.single->tau) out.changed_at = hours[*out.single->tau].hour_start;
    } else {
      auto multi = detect_multiple(y, params);
      for (auto tau : multi.change_points) out.all_changes.push_back(hours[tau].hour_start);
      if (!out.all_changes.empty()) out.changed_at = out.all_changes.front();
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<StationChangePoint> changepoint_report(std::span<const HourlyMetrics> hourly,
                                                   const ChangePointParams& params, ChangePointMode mode) {
  std::vector<std::future<StationChangePoint>> jobs;
  std::size_t i = 0;
  while (i < hourly.size()) {
    std::size_t j = i;
    while (j < hourly.size() && hourly[j].station_id == hourly[i].station_id) ++j;
    jobs.push_back(std::async(std::launch::async, detect_station, hourly.subspan(i, j - i), params, mode));
    i = j;
  }
  std::vector<StationChangePoint> out;
  out.reserve(jobs.size());
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

}  // namespace noisescape
