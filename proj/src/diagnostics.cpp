#include "noisescape/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "noisescape/errors.hpp"

namespace noisescape {

namespace {

constexpr std::size_t kMinSeriesForBound = 30;
constexpr double kZ975 = 1.96;
constexpr double kInsideFraction = 0.95;

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> center(std::span<const double> y) {
  if (y.size() < 2) throw InsufficientData("centering needs at least 2 points");
  const double m = mean_of(y);
  std::vector<double> out(y.size());
  std::transform(y.begin(), y.end(), out.begin(), [m](double v) { return v - m; });
  return out;
}

double phi(std::span<const double> centered, std::size_t tau) {
  const std::size_t n = centered.size();
  if (n < 2 || tau > n - 2) throw std::invalid_argument(fmt::format("lag {} out of range for {} points", tau, n));

  const double m1 = mean_of(centered);
  double m2 = 0.0;
  for (double v : centered) m2 += v * v;
  m2 /= static_cast<double>(n);

  double d1 = 0.0, d2 = 0.0;
  for (double v : centered) {
    d1 += (v - m1) * (v - m1);
    const double q = v * v - m2;
    d2 += q * q;
  }
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw UndefinedDiagnostic("cross-correlation undefined: series or its square has zero variance");

  double num = 0.0;
  for (std::size_t t = 0; t + tau < n; ++t) num += (centered[t] - m1) * (centered[t + tau] * centered[t + tau] - m2);
  return num / (std::sqrt(d1) * std::sqrt(d2));
}

std::string_view to_string(LinearityMode mode) { return mode == LinearityMode::Strict ? "strict" : "fraction95"; }

std::optional<LinearityMode> parse_linearity_mode(std::string_view text) {
  if (text == "strict") return LinearityMode::Strict;
  if (text == "fraction95") return LinearityMode::Fraction95;
  return std::nullopt;
}

std::string_view to_string(Linearity verdict) { return verdict == Linearity::Linear ? "linear" : "nonlinear"; }

std::size_t LinearityDiagnostic::lags_inside() const {
  return static_cast<std::size_t>(
      std::count_if(phi.begin(), phi.end(), [this](double v) { return std::fabs(v) <= bound; }));
}

double LinearityDiagnostic::fraction_inside() const {
  return phi.empty() ? 1.0 : static_cast<double>(lags_inside()) / static_cast<double>(phi.size());
}

Linearity linearity_verdict(std::span<const double> phi_values, double bound, LinearityMode mode) {
  const auto inside = std::count_if(phi_values.begin(), phi_values.end(),
                                    [bound](double v) { return std::fabs(v) <= bound; });
  const auto total = static_cast<std::ptrdiff_t>(phi_values.size());
  if (mode == LinearityMode::Strict) return inside == total ? Linearity::Linear : Linearity::Nonlinear;
  return static_cast<double>(inside) >= kInsideFraction * static_cast<double>(total) ? Linearity::Linear
                                                                                     : Linearity::Nonlinear;
}

LinearityDiagnostic linearity_test(std::span<const double> y, std::size_t max_lag, LinearityMode mode) {
  const std::size_t need = std::max(max_lag + 2, kMinSeriesForBound);
  if (y.size() < need)
    throw InsufficientData(fmt::format("linearity test needs at least {} points, got {}", need, y.size()));
  auto yc = center(y);

  LinearityDiagnostic d;
  d.n = y.size();
  d.mode = mode;
  d.bound = kZ975 / std::sqrt(static_cast<double>(d.n));
  d.phi.reserve(max_lag + 1);
  for (std::size_t tau = 0; tau <= max_lag; ++tau) d.phi.push_back(phi(yc, tau));
  d.verdict = linearity_verdict(d.phi, d.bound, mode);
  return d;
}

}  // namespace noisescape
