#pragma once

// Domain types shared by every analysis stage: sound levels, samples,
// hourly metrics, time-of-day bands and the pre/during period split.
//
// All timestamps are local civil time taken at face value. No time zone or
// DST conversion is ever applied; "23:00" means the wall clock read 23:00.

#include <array>
#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace noisescape {

using LocalTime = std::chrono::local_seconds;
using LocalDate = std::chrono::local_days;

inline constexpr std::chrono::minutes kSlot{5};
inline constexpr int kSlotsPerHour = 12;

/// Sound pressure level in dB.
class Decibel {
 public:
  constexpr Decibel() = default;
  constexpr explicit Decibel(double db) : db_(db) {}

  constexpr double value() const { return db_; }

  /// Finite and inside [0, 140] dB.
  bool is_plausible() const;

  friend constexpr auto operator<=>(Decibel, Decibel) = default;

 private:
  double db_ = 0.0;
};

inline constexpr double kMinPlausibleDb = 0.0;
inline constexpr double kMaxPlausibleDb = 140.0;

struct GeoPoint {
  double lat = 0.0;  // degrees north
  double lon = 0.0;  // signed degrees east; west is negative

  /// Builds a point from a longitude printed as positive degrees west.
  static GeoPoint from_degrees_west(double lat, double lon_west) { return {lat, -lon_west}; }

  bool is_valid() const;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Station {
  std::string id;
  std::string name;
  GeoPoint location;
};

struct NoiseSample {
  std::string station_id;
  LocalTime timestamp;
  Decibel leq;
  Decibel lmax;

  friend bool operator==(const NoiseSample&, const NoiseSample&) = default;
};

inline constexpr int kLowCoverageSamples = 6;

struct HourlyMetrics {
  std::string station_id;
  LocalTime hour_start;
  Decibel avg;  // energy average of the hour's L_eq samples
  Decibel max;  // largest L_max in the hour
  Decibel min;  // smallest L_eq in the hour
  int n_samples = 0;

  bool low_coverage() const { return n_samples < kLowCoverageSamples; }

  friend bool operator==(const HourlyMetrics&, const HourlyMetrics&) = default;
};

// ---------------------------------------------------------------------------
// Station ordering
// ---------------------------------------------------------------------------

/// Orders station ids numerically when both are integers ("2" < "10"),
/// lexicographically otherwise. Every report is sorted with this.
struct StationOrder {
  bool operator()(std::string_view a, std::string_view b) const;
};

// ---------------------------------------------------------------------------
// Time-of-day bands
// ---------------------------------------------------------------------------

enum class TimeBand { Night, Day, Evening };

inline constexpr std::array<TimeBand, 3> kAllBands{TimeBand::Night, TimeBand::Day, TimeBand::Evening};

/// Local hours at which each band begins. Intervals are half-open, so a
/// boundary hour belongs to the band it starts.
struct BandBoundaries {
  int day_start = 7;
  int evening_start = 19;
  int night_start = 23;

  bool is_valid() const;
  friend bool operator==(const BandBoundaries&, const BandBoundaries&) = default;
};

TimeBand band_of_hour(int hour, const BandBoundaries& bounds = {});
TimeBand band_of(LocalTime t, const BandBoundaries& bounds = {});

/// Number of clock hours the band spans (8, 12 and 4 by default).
int band_width(TimeBand band, const BandBoundaries& bounds = {});

/// Civil date a band-hour is attributed to. Night hours after midnight
/// belong to the previous date, so one night is one entry.
LocalDate band_date(LocalTime hour_start, const BandBoundaries& bounds = {});

std::string_view to_string(TimeBand band);
std::optional<TimeBand> parse_band(std::string_view text);

// ---------------------------------------------------------------------------
// Periods
// ---------------------------------------------------------------------------

enum class Period { Pre, During };

std::string_view to_string(Period period);

/// Analysis window [analysis_start, analysis_end) split at split_instant.
class PeriodSplit {
 public:
  /// Throws std::invalid_argument unless start < split < end.
  PeriodSplit(LocalTime analysis_start, LocalTime split_instant, LocalTime analysis_end);

  /// 2020-01-01T00:00 .. 2020-03-25T00:00 .. 2020-05-12T00:00.
  static PeriodSplit lockdown_2020();

  LocalTime analysis_start() const { return start_; }
  LocalTime split_instant() const { return split_; }
  LocalTime analysis_end() const { return end_; }

  bool contains(LocalTime t) const { return t >= start_ && t < end_; }

  friend bool operator==(const PeriodSplit&, const PeriodSplit&) = default;

 private:
  LocalTime start_;
  LocalTime split_;
  LocalTime end_;
};

/// Pre iff t < split_instant. Throws RangeError outside the window.
Period period_of(LocalTime t, const PeriodSplit& split);

/// Whole clock hours a period spans.
std::int64_t calendar_hours(const PeriodSplit& split, Period period);

// ---------------------------------------------------------------------------
// Timestamp text
// ---------------------------------------------------------------------------

/// Accepts "YYYY-MM-DDTHH:MM" or "YYYY-MM-DDTHH:MM:SS" (a space may replace
/// the 'T'). Returns nullopt for anything else, including invalid dates.
std::optional<LocalTime> parse_timestamp(std::string_view text);

/// "YYYY-MM-DD"
std::optional<LocalDate> parse_date(std::string_view text);

/// "YYYY-MM-DDTHH:MM", with ":SS" appended only when seconds are non-zero.
std::string format_timestamp(LocalTime t);
std::string format_date(LocalDate d);

inline LocalDate civil_date(LocalTime t) { return std::chrono::floor<std::chrono::days>(t); }
int hour_of_day(LocalTime t);
inline LocalTime hour_floor(LocalTime t) { return std::chrono::floor<std::chrono::hours>(t); }

}  // namespace noisescape
