#pragma once

// Great-circle neighbourhood joins between stations and point data, and the
// noise-versus-traffic regression.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisescape/ingest.hpp"
#include "noisescape/model.hpp"

namespace noisescape {

inline constexpr double kEarthRadiusM = 6371008.8;  // mean radius, spherical model
inline constexpr double kDefaultRadiusM = 500.0;

/// Haversine distance on a sphere of radius kEarthRadiusM, in metres.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

inline const GeoPoint& location_of(const GeoPoint& p) { return p; }
inline const GeoPoint& location_of(const TrafficPoint& p) { return p.location; }
inline const GeoPoint& location_of(const SchoolPoint& p) { return p.location; }
inline const GeoPoint& location_of(const Station& s) { return s.location; }

/// Points at distance <= radius_m from center (boundary inclusive), in input
/// order. Linear scan; point sets here are small.
template <typename Point>
std::vector<Point> points_within(const GeoPoint& center, std::span<const Point> points,
                                 double radius_m = kDefaultRadiusM) {
  std::vector<Point> out;
  for (const auto& p : points)
    if (haversine_m(center, location_of(p)) <= radius_m) out.push_back(p);
  return out;
}

template <typename Point>
std::vector<Point> points_within(const GeoPoint& center, const std::vector<Point>& points,
                                 double radius_m = kDefaultRadiusM) {
  return points_within(center, std::span<const Point>(points), radius_m);
}

struct StationTraffic {
  std::string station_id;
  std::size_t n_points_in_radius = 0;
  std::optional<std::array<double, 3>> mean_count;  // per TimeBand; empty when no point is in range

  std::optional<double> mean(TimeBand band) const {
    if (!mean_count) return std::nullopt;
    return (*mean_count)[static_cast<std::size_t>(band)];
  }
};

/// Arithmetic mean of the in-radius detectors' counts, per band.
std::vector<StationTraffic> station_traffic(std::span<const Station> stations, std::span<const TrafficPoint> traffic,
                                            double radius_m = kDefaultRadiusM);

struct SchoolCount {
  std::string station_id;
  std::size_t count = 0;
};

std::vector<SchoolCount> school_count(std::span<const Station> stations, std::span<const SchoolPoint> schools,
                                      double radius_m = kDefaultRadiusM);

struct TrafficNoisePoint {
  double traffic = 0.0;
  double noise_db = 0.0;
};

struct FitSummary {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // 1 - RSS/TSS, 0 when the noise is constant
  std::size_t n = 0;
};

/// OLS of noise on traffic. nullopt with fewer than 3 points or when every
/// traffic value is the same.
std::optional<FitSummary> noise_traffic_fit(std::span<const TrafficNoisePoint> points);

}  // namespace noisescape
