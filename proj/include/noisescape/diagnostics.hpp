#pragma once

// Linearity diagnostic: normalised cross-correlation between the centred
// series y' and its square, lag by lag,
//
//   phi(tau) = sum_{t=1}^{N-tau} (y'(t) - mean y') ((y'(t+tau))^2 - mean y'^2)
//              / ( sqrt(sum_t (y'(t) - mean y')^2) * sqrt(sum_t ((y'(t))^2 - mean y'^2)^2) )
//
// The denominator sums squared deviations over all N points, so |phi| <= 1.
// A series is judged linear when phi stays inside +-1.96/sqrt(N).

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace noisescape {

inline constexpr std::size_t kDefaultMaxLag = 50;

/// y - mean(y). Throws InsufficientData when fewer than 2 points.
std::vector<double> center(std::span<const double> y);

/// phi at one lag for an already centred series. Requires tau <= n - 2.
/// Throws UndefinedDiagnostic when either normaliser is zero.
double phi(std::span<const double> centered, std::size_t tau);

enum class LinearityMode {
  Strict,      // every lag inside the band
  Fraction95,  // at least 95% of lags inside the band
};

std::string_view to_string(LinearityMode mode);
std::optional<LinearityMode> parse_linearity_mode(std::string_view text);

enum class Linearity { Linear, Nonlinear };

std::string_view to_string(Linearity verdict);

struct LinearityDiagnostic {
  std::vector<double> phi;  // lags 0..max_lag
  double bound = 0.0;       // 1.96 / sqrt(n)
  Linearity verdict = Linearity::Linear;
  LinearityMode mode = LinearityMode::Strict;
  std::size_t n = 0;

  std::size_t lags_inside() const;
  double fraction_inside() const;
};

/// Verdict from a phi vector alone.
Linearity linearity_verdict(std::span<const double> phi, double bound, LinearityMode mode);

/// Requires n >= max(max_lag + 2, 30) (InsufficientData).
LinearityDiagnostic linearity_test(std::span<const double> y, std::size_t max_lag = kDefaultMaxLag,
                                   LinearityMode mode = LinearityMode::Strict);

}  // namespace noisescape
