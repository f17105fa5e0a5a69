#pragma once

// Penalized-likelihood change-point detection.
//
// A segment y[i..j] costs the negated maximised Gaussian log-likelihood with
// its own mean and variance:
//
//   C(i, j) = (m / 2) * (log(2 pi) + log(max(var_mle, variance_floor)) + 1),  m = j - i + 1
//
// A split at tau (the left segment is y_1..y_tau, 1-based) is accepted when
//
//   C(1, tau) + C(tau + 1, n) + penalty < C(1, n),   penalty = d * log(n)
//
// with d = 3 extra parameters per change (location, mean, variance).
// Several change points are found with PELT: exact optimal partitioning
// with candidate pruning, linear expected cost on stationary segments.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisescape/model.hpp"

namespace noisescape {

struct ChangePointParams {
  std::size_t min_segment_length = 5;
  double variance_floor = 1e-8;    // dB^2
  double params_per_change = 3.0;  // d in the penalty d * log(n)

  friend bool operator==(const ChangePointParams&, const ChangePointParams&) = default;
};

/// Prefix sums of y and y^2 (taken about the series mean, which keeps the
/// variance difference well conditioned) for O(1) segment moments.
class SegmentStats {
 public:
  explicit SegmentStats(std::span<const double> y);

  std::size_t size() const { return sum_.size() - 1; }

  /// Maximum-likelihood variance of y[first..last], 0-based inclusive.
  double mle_variance(std::size_t first, std::size_t last) const;
  double mean(std::size_t first, std::size_t last) const;

 private:
  double offset_ = 0.0;
  std::vector<double> sum_;     // sum_[k] = sum of (y - offset) over [0, k)
  std::vector<double> sum_sq_;  // same for squares
};

/// Segment cost over y[first..last], 0-based inclusive. Segments shorter
/// than params.min_segment_length violate the contract (std::invalid_argument).
double gaussian_cost(const SegmentStats& stats, std::size_t first, std::size_t last,
                     const ChangePointParams& params = {});

double bic_penalty(std::size_t n, const ChangePointParams& params = {});

enum class Verdict { Change, NoChange };

struct ObjectivePoint {
  std::size_t tau = 0;
  double objective = 0.0;  // C(1, tau) + C(tau + 1, n) + penalty
};

struct ChangePointResult {
  std::optional<std::size_t> tau;  // size of the left segment, set only on Change
  std::size_t best_tau = 0;        // minimiser of the objective, reported either way
  double cost_left = 0.0;
  double cost_right = 0.0;
  double cost_unsplit = 0.0;
  double penalty = 0.0;
  double best_objective = 0.0;
  Verdict verdict = Verdict::NoChange;
  std::vector<ObjectivePoint> curve;  // every admissible tau, ascending
};

/// Objectives closer than this (relative) count as tied, so that splits
/// which are equal in exact arithmetic are not separated by rounding.
inline constexpr double kTieTolerance = 1e-10;

/// Best single split. Admissible tau leave at least min_segment_length
/// points on each side; ties go to the smallest tau. Throws
/// InsufficientData when n < 2 * min_segment_length.
ChangePointResult detect_single(std::span<const double> y, const ChangePointParams& params = {});

struct MultipleChangeResult {
  std::vector<std::size_t> change_points;  // sorted; each is the size of the prefix before the change
  double objective = 0.0;                  // sum of segment costs + penalty per change
};

/// Optimal segmentation under the same cost and a penalty per change point,
/// solved exactly with PELT. Pruning a candidate s at time t only takes
/// effect from t + min_segment_length on, which keeps the search exact with
/// a minimum segment length.
MultipleChangeResult detect_multiple(std::span<const double> y, const ChangePointParams& params = {});

enum class ChangePointMode { Single, Multiple };

std::string_view to_string(ChangePointMode mode);

struct StationChangePoint {
  std::string station_id;
  std::size_t n_hours = 0;
  std::optional<LocalTime> series_start;
  std::optional<ChangePointResult> single;  // Single mode
  std::optional<LocalTime> changed_at;      // first hour of the new regime
  std::vector<LocalTime> all_changes;       // Multiple mode
  std::string error;                        // set when detection could not run

  std::optional<LocalDate> change_date() const {
    if (!changed_at) return std::nullopt;
    return civil_date(*changed_at);
  }
};

/// Runs detection on each station's hourly average series. The series is
/// the station's data-present hours in time order, so tau maps to the
/// hour_start of the tau-th hour (0-based); without gaps that is
/// series_start + tau hours. In Multiple mode changed_at is the first
/// change. Stations are processed concurrently; a failing station keeps
/// its error and the others continue.
std::vector<StationChangePoint> changepoint_report(std::span<const HourlyMetrics> hourly,
                                                   const ChangePointParams& params = {},
                                                   ChangePointMode mode = ChangePointMode::Single);

}  // namespace noisescape
