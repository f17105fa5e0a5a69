#pragma once

// Readers for the four input files and the gap auditor.
//
//   samples.csv   station_id,timestamp,leq_db,lmax_db
//   stations.csv  station_id,name,lat,lon      (lon signed east)
//                 station_id,name,lat,lon_w    (lon printed as positive west)
//   traffic.csv   lat,lon,night_count,day_count,evening_count
//   schools.csv   name,lat,lon
//
// Bad rows are never dropped silently: each one is kept in the report with
// its line number, reason and original text.

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noisescape/model.hpp"

namespace noisescape {

enum class FlagReason { Malformed, OutOfRange, LmaxBelowLeq, Duplicate, MisalignedTimestamp };

std::string_view to_string(FlagReason reason);

struct RowFlag {
  std::size_t line = 0;  // 1-based line in the source file
  FlagReason reason = FlagReason::Malformed;
  std::string text;
  std::string detail;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::vector<RowFlag> flags;

  std::size_t rows_flagged() const { return flags.size(); }
};

/// Loggers may drift; a timestamp within this distance of a 5-minute
/// boundary is snapped onto it, anything further is flagged.
inline constexpr std::chrono::seconds kSnapTolerance{60};

struct SampleBatch {
  std::vector<NoiseSample> samples;  // sorted by (station_id, timestamp)
  IngestReport report;
};

/// Throws InputError if the stream cannot be read.
SampleBatch parse_samples(std::istream& in);

/// Writes the samples in the format parse_samples reads, header included.
void write_samples(std::ostream& out, std::span<const NoiseSample> samples);

template <typename T>
struct LoadResult {
  std::vector<T> items;
  std::vector<RowFlag> flags;
};

struct TrafficPoint {
  GeoPoint location;
  std::array<double, 3> counts{};  // mean hourly vehicles, indexed by TimeBand

  double count(TimeBand band) const { return counts[static_cast<std::size_t>(band)]; }
};

struct SchoolPoint {
  GeoPoint location;
  std::string name;
};

/// Duplicate station ids throw InputError; bad coordinates are flagged.
LoadResult<Station> load_stations(std::istream& in);
LoadResult<TrafficPoint> load_traffic(std::istream& in);
LoadResult<SchoolPoint> load_schools(std::istream& in);

// ---------------------------------------------------------------------------
// Gap audit
// ---------------------------------------------------------------------------

struct StationGaps {
  std::string station_id;
  std::int64_t expected_slots_pre = 0;
  std::int64_t expected_slots_during = 0;
  std::int64_t present_slots_pre = 0;
  std::int64_t present_slots_during = 0;
  std::vector<LocalTime> missing;  // every empty 5-minute slot in the window

  std::int64_t expected_hours(Period p) const {
    return (p == Period::Pre ? expected_slots_pre : expected_slots_during) / kSlotsPerHour;
  }
};

/// Lists every 5-minute slot of the window without a sample, per station.
/// Stations named in `station_ids` but absent from `samples` report every
/// slot missing. Samples must be sorted as parse_samples returns them.
std::vector<StationGaps> audit_gaps(std::span<const NoiseSample> samples, const PeriodSplit& window,
                                    std::span<const std::string> station_ids);

/// Distinct station ids in `samples`, in StationOrder.
std::vector<std::string> station_ids_of(std::span<const NoiseSample> samples);

}  // namespace noisescape
