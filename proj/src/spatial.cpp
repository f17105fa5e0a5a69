#include "noisescape/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "noisescape/trend.hpp"

namespace noisescape {

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double phi1 = a.lat * deg;
  const double phi2 = b.lat * deg;
  const double s_lat = std::sin(0.5 * (phi2 - phi1));
  const double s_lon = std::sin(0.5 * (b.lon - a.lon) * deg);
  double h = s_lat * s_lat + std::cos(phi1) * std::cos(phi2) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

std::vector<StationTraffic> station_traffic(std::span<const Station> stations, std::span<const TrafficPoint> traffic,
                                            double radius_m) {
  std::vector<StationTraffic> out;
  out.reserve(stations.size());
  for (const auto& s : stations) {
    auto near = points_within(s.location, traffic, radius_m);
    StationTraffic st{s.id, near.size(), std::nullopt};
    if (!near.empty()) {
      std::array<double, 3> sum{};
      for (const auto& p : near)
        for (std::size_t b = 0; b < sum.size(); ++b) sum[b] += p.counts[b];
      for (double& v : sum) v /= static_cast<double>(near.size());
      st.mean_count = sum;
    }
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<SchoolCount> school_count(std::span<const Station> stations, std::span<const SchoolPoint> schools,
                                      double radius_m) {
  std::vector<SchoolCount> out;
  out.reserve(stations.size());
  for (const auto& s : stations) out.push_back({s.id, points_within(s.location, schools, radius_m).size()});
  return out;
}

std::optional<FitSummary> noise_traffic_fit(std::span<const TrafficNoisePoint> points) {
  if (points.size() < 3) return std::nullopt;
  std::vector<double> x, y;
  x.reserve(points.size());
  y.reserve(points.size());
  for (const auto& p : points) {
    x.push_back(p.traffic);
    y.push_back(p.noise_db);
  }
  try {
    auto fit = ols_fit(y, x);
    return FitSummary{fit.slope, fit.intercept, fit.r_squared(), fit.n};
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace noisescape
