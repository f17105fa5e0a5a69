#include "noisescape/model.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "noisescape/errors.hpp"

namespace noisescape {

using namespace std::chrono;

bool Decibel::is_plausible() const {
  return std::isfinite(db_) && db_ >= kMinPlausibleDb && db_ <= kMaxPlausibleDb;
}

bool GeoPoint::is_valid() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 && lon >= -180.0 &&
         lon <= 180.0;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::string_view strip_leading_zeros(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return s;
}

}  // namespace

bool StationOrder::operator()(std::string_view a, std::string_view b) const {
  if (all_digits(a) && all_digits(b)) {
    auto na = strip_leading_zeros(a);
    auto nb = strip_leading_zeros(b);
    if (na.size() != nb.size()) return na.size() < nb.size();
    if (na != nb) return na < nb;
    return a < b;
  }
  return a < b;
}

bool BandBoundaries::is_valid() const {
  return 0 <= day_start && day_start < evening_start && evening_start < night_start && night_start <= 23;
}

TimeBand band_of_hour(int hour, const BandBoundaries& bounds) {
  if (hour >= bounds.night_start || hour < bounds.day_start) return TimeBand::Night;
  if (hour < bounds.evening_start) return TimeBand::Day;
  return TimeBand::Evening;
}

TimeBand band_of(LocalTime t, const BandBoundaries& bounds) { return band_of_hour(hour_of_day(t), bounds); }

int band_width(TimeBand band, const BandBoundaries& bounds) {
  switch (band) {
    case TimeBand::Night:
      return 24 - bounds.night_start + bounds.day_start;
    case TimeBand::Day:
      return bounds.evening_start - bounds.day_start;
    case TimeBand::Evening:
      return bounds.night_start - bounds.evening_start;
  }
  return 0;
}

LocalDate band_date(LocalTime hour_start, const BandBoundaries& bounds) {
  LocalDate d = civil_date(hour_start);
  if (hour_of_day(hour_start) < bounds.day_start) d -= days{1};
  return d;
}

std::string_view to_string(TimeBand band) {
  switch (band) {
    case TimeBand::Night:
      return "night";
    case TimeBand::Day:
      return "day";
    case TimeBand::Evening:
      return "evening";
  }
  return "?";
}

std::optional<TimeBand> parse_band(std::string_view text) {
  for (TimeBand b : kAllBands)
    if (to_string(b) == text) return b;
  return std::nullopt;
}

std::string_view to_string(Period period) { return period == Period::Pre ? "pre" : "during"; }

PeriodSplit::PeriodSplit(LocalTime analysis_start, LocalTime split_instant, LocalTime analysis_end)
    : start_(analysis_start), split_(split_instant), end_(analysis_end) {
  if (!(start_ < split_ && split_ < end_))
    throw std::invalid_argument("period split requires analysis_start < split_instant < analysis_end");
}

PeriodSplit PeriodSplit::lockdown_2020() {
  return PeriodSplit(local_days{year{2020} / January / 1}, local_days{year{2020} / March / 25},
                     local_days{year{2020} / May / 12});
}

Period period_of(LocalTime t, const PeriodSplit& split) {
  if (!split.contains(t)) throw RangeError("timestamp " + format_timestamp(t) + " is outside the analysis window");
  return t < split.split_instant() ? Period::Pre : Period::During;
}

std::int64_t calendar_hours(const PeriodSplit& split, Period period) {
  auto span = period == Period::Pre ? split.split_instant() - split.analysis_start()
                                    : split.analysis_end() - split.split_instant();
  return floor<hours>(span).count();
}

namespace {

template <typename Int>
bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, Int& out) {
  if (pos + len > s.size()) return false;
  auto sub = s.substr(pos, len);
  if (!all_digits(sub)) return false;
  auto [ptr, ec] = std::from_chars(sub.data(), sub.data() + sub.size(), out);
  return ec == std::errc{} && ptr == sub.data() + sub.size();
}

}  // namespace

std::optional<LocalDate> parse_date(std::string_view text) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!parse_fixed(text, 0, 4, y) || !parse_fixed(text, 5, 2, m) || !parse_fixed(text, 8, 2, d))
    return std::nullopt;
  year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) return std::nullopt;
  return local_days{ymd};
}

std::optional<LocalTime> parse_timestamp(std::string_view text) {
  if (text.size() != 16 && text.size() != 19) return std::nullopt;
  if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
  auto date = parse_date(text.substr(0, 10));
  if (!date) return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (text[13] != ':' || !parse_fixed(text, 11, 2, hh) || !parse_fixed(text, 14, 2, mm)) return std::nullopt;
  if (text.size() == 19 && (text[16] != ':' || !parse_fixed(text, 17, 2, ss))) return std::nullopt;
  if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return LocalTime{*date} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_date(LocalDate d) {
  year_month_day ymd{d};
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

int hour_of_day(LocalTime t) { return static_cast<int>(floor<hours>(t - civil_date(t)).count()); }

std::string format_timestamp(LocalTime t) {
  LocalDate d = civil_date(t);
  hh_mm_ss hms{t - d};
  auto out = fmt::format("{}T{:02}:{:02}", format_date(d), hms.hours().count(), hms.minutes().count());
  if (hms.seconds().count() != 0) out += fmt::format(":{:02}", hms.seconds().count());
  return out;
}

}  // namespace noisescape
