#include "noisescape/ingest.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "noisescape/csv.hpp"
#include "noisescape/errors.hpp"

namespace noisescape {

using namespace std::chrono;

std::string_view to_string(FlagReason reason) {
  switch (reason) {
    case FlagReason::Malformed:
      return "malformed";
    case FlagReason::OutOfRange:
      return "out-of-range";
    case FlagReason::LmaxBelowLeq:
      return "lmax<leq";
    case FlagReason::Duplicate:
      return "duplicate";
    case FlagReason::MisalignedTimestamp:
      return "misaligned-timestamp";
  }
  return "?";
}

namespace {

bool is_blank(std::string_view line) { return line.find_first_not_of(" \t") == std::string_view::npos; }

void require_readable(std::istream& in, std::string_view what) {
  if (!in) throw InputError(fmt::format("cannot read {} input", what));
}

void check_stream_end(std::istream& in, std::string_view what) {
  if (in.bad()) throw InputError(fmt::format("I/O error while reading {} input", what));
}

/// Iterates the data lines of a CSV stream. The first non-blank line is
/// treated as a header when its first field equals `header_key`.
template <typename Fn>
std::vector<std::string> for_each_record(std::istream& in, std::string_view what, std::string_view header_key,
                                         Fn&& fn) {
  require_readable(in, what);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  std::vector<std::string> header;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    auto fields = csv::split_record(line);
    if (first) {
      first = false;
      if (!fields.empty() && fields.front() == header_key) {
        header = std::move(fields);
        continue;
      }
    }
    fn(line_no, line, fields);
  }
  check_stream_end(in, what);
  return header;
}

std::optional<LocalTime> snap_to_slot(LocalTime t) {
  const auto slot = duration_cast<seconds>(kSlot).count();
  auto secs = t.time_since_epoch().count();
  auto rem = ((secs % slot) + slot) % slot;
  if (rem <= kSnapTolerance.count()) return LocalTime{seconds{secs - rem}};
  if (slot - rem <= kSnapTolerance.count()) return LocalTime{seconds{secs + (slot - rem)}};
  return std::nullopt;
}

struct Candidate {
  NoiseSample sample;
  std::size_t line;
  std::string text;
};

}  // namespace

SampleBatch parse_samples(std::istream& in) {
  SampleBatch batch;
  auto& report = batch.report;
  std::vector<Candidate> candidates;

  auto flag = [&](std::size_t line_no, const std::string& text, FlagReason reason, std::string detail) {
    report.flags.push_back({line_no, reason, text, std::move(detail)});
  };

  for_each_record(in, "samples", "station_id",
                  [&](std::size_t line_no, const std::string& text, const std::vector<std::string>& f) {
                    ++report.rows_read;
                    if (f.size() != 4 || f[0].empty()) {
                      flag(line_no, text, FlagReason::Malformed, fmt::format("expected 4 fields, got {}", f.size()));
                      return;
                    }
                    auto ts = parse_timestamp(f[1]);
                    auto leq = csv::parse_double(f[2]);
                    auto lmax = csv::parse_double(f[3]);
                    if (!ts || !leq || !lmax) {
                      flag(line_no, text, FlagReason::Malformed, "unparseable timestamp or level");
                      return;
                    }
                    Decibel leq_db{*leq}, lmax_db{*lmax};
                    if (!leq_db.is_plausible() || !lmax_db.is_plausible()) {
                      flag(line_no, text, FlagReason::OutOfRange, "level outside [0, 140] dB");
                      return;
                    }
                    if (lmax_db < leq_db) {
                      flag(line_no, text, FlagReason::LmaxBelowLeq, "");
                      return;
                    }
                    auto slot = snap_to_slot(*ts);
                    if (!slot) {
                      flag(line_no, text, FlagReason::MisalignedTimestamp, "more than 60 s from a 5-minute boundary");
                      return;
                    }
                    candidates.push_back({{f[0], *slot, leq_db, lmax_db}, line_no, text});
                  });

  StationOrder order;
  std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.sample.station_id != b.sample.station_id) return order(a.sample.station_id, b.sample.station_id);
    return a.sample.timestamp < b.sample.timestamp;
  });

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& c = candidates[i];
    if (!batch.samples.empty()) {
      const auto& kept = batch.samples.back();
      if (kept.station_id == c.sample.station_id && kept.timestamp == c.sample.timestamp) {
        bool exact = kept == c.sample;
        flag(c.line, c.text, FlagReason::Duplicate, exact ? "exact duplicate" : "conflicting values for the same slot");
        continue;
      }
    }
    batch.samples.push_back(std::move(c.sample));
  }

  report.rows_accepted = batch.samples.size();
  std::sort(report.flags.begin(), report.flags.end(),
            [](const RowFlag& a, const RowFlag& b) { return a.line < b.line; });
  return batch;
}

void write_samples(std::ostream& out, std::span<const NoiseSample> samples) {
  out << "station_id,timestamp,leq_db,lmax_db\n";
  for (const auto& s : samples)
    out << fmt::format("{},{},{},{}\n", csv::escape(s.station_id), format_timestamp(s.timestamp), s.leq.value(),
                       s.lmax.value());
}

namespace {

std::optional<GeoPoint> parse_point(std::string_view lat_text, std::string_view lon_text, bool lon_is_west) {
  auto lat = csv::parse_double(lat_text);
  auto lon = csv::parse_double(lon_text);
  if (!lat || !lon) return std::nullopt;
  return lon_is_west ? GeoPoint::from_degrees_west(*lat, *lon) : GeoPoint{*lat, *lon};
}

}  // namespace

LoadResult<Station> load_stations(std::istream& in) {
  LoadResult<Station> result;
  std::vector<std::tuple<std::size_t, std::string, std::vector<std::string>>> rows;
  auto header = for_each_record(in, "stations", "station_id",
                                [&](std::size_t line_no, const std::string& text, const std::vector<std::string>& f) {
                                  rows.emplace_back(line_no, text, f);
                                });
  const bool lon_is_west = header.size() >= 4 && header[3] == "lon_w";

  std::set<std::string, StationOrder> seen;
  for (auto& [line_no, text, f] : rows) {
    if (f.size() != 4 || f[0].empty()) {
      result.flags.push_back({line_no, FlagReason::Malformed, text, "expected 4 fields"});
      continue;
    }
    auto point = parse_point(f[2], f[3], lon_is_west);
    if (!point) {
      result.flags.push_back({line_no, FlagReason::Malformed, text, "unparseable coordinate"});
      continue;
    }
    if (!point->is_valid()) {
      result.flags.push_back({line_no, FlagReason::OutOfRange, text, "coordinate out of range"});
      continue;
    }
    if (!seen.insert(f[0]).second) throw InputError(fmt::format("duplicate station_id '{}' on line {}", f[0], line_no));
    result.items.push_back({f[0], f[1], *point});
  }
  std::stable_sort(result.items.begin(), result.items.end(),
                   [](const Station& a, const Station& b) { return StationOrder{}(a.id, b.id); });
  return result;
}

LoadResult<TrafficPoint> load_traffic(std::istream& in) {
  LoadResult<TrafficPoint> result;
  for_each_record(in, "traffic", "lat", [&](std::size_t line_no, const std::string& text, const std::vector<std::string>& f) {
    if (f.size() != 5) {
      result.flags.push_back({line_no, FlagReason::Malformed, text, "expected 5 fields"});
      return;
    }
    auto point = parse_point(f[0], f[1], false);
    TrafficPoint tp;
    bool ok = point.has_value();
    for (std::size_t b = 0; b < 3 && ok; ++b) {
      auto v = csv::parse_double(f[2 + b]);
      ok = v.has_value();
      if (ok) tp.counts[b] = *v;
    }
    if (!ok) {
      result.flags.push_back({line_no, FlagReason::Malformed, text, "unparseable field"});
      return;
    }
    tp.location = *point;
    bool negative = std::any_of(tp.counts.begin(), tp.counts.end(), [](double c) { return c < 0.0; });
    if (!tp.location.is_valid() || negative) {
      result.flags.push_back({line_no, FlagReason::OutOfRange, text, negative ? "negative count" : "coordinate out of range"});
      return;
    }
    result.items.push_back(tp);
  });
  return result;
}

LoadResult<SchoolPoint> load_schools(std::istream& in) {
  LoadResult<SchoolPoint> result;
  for_each_record(in, "schools", "name", [&](std::size_t line_no, const std::string& text, const std::vector<std::string>& f) {
    if (f.size() != 3) {
      result.flags.push_back({line_no, FlagReason::Malformed, text, "expected 3 fields"});
      return;
    }
    auto point = parse_point(f[1], f[2], false);
    if (!point) {
      result.flags.push_back({line_no, FlagReason::Malformed, text, "unparseable coordinate"});
      return;
    }
    if (!point->is_valid()) {
      result.flags.push_back({line_no, FlagReason::OutOfRange, text, "coordinate out of range"});
      return;
    }
    result.items.push_back({*point, f[0]});
  });
  return result;
}

std::vector<std::string> station_ids_of(std::span<const NoiseSample> samples) {
  std::set<std::string, StationOrder> ids;
  for (const auto& s : samples) ids.insert(s.station_id);
  return {ids.begin(), ids.end()};
}

std::vector<StationGaps> audit_gaps(std::span<const NoiseSample> samples, const PeriodSplit& window,
                                    std::span<const std::string> station_ids) {
  std::set<std::string, StationOrder> ids(station_ids.begin(), station_ids.end());
  for (const auto& s : samples) ids.insert(s.station_id);

  const auto slot = duration_cast<seconds>(kSlot);
  auto start_secs = window.analysis_start().time_since_epoch().count();
  auto rem = ((start_secs % slot.count()) + slot.count()) % slot.count();
  const LocalTime first_slot{seconds{rem == 0 ? start_secs : start_secs + slot.count() - rem}};

  std::vector<StationGaps> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    StationGaps g;
    g.station_id = id;

    auto lo = std::lower_bound(samples.begin(), samples.end(), id, [](const NoiseSample& s, const std::string& key) {
      return StationOrder{}(s.station_id, key);
    });
    auto it = lo;
    for (LocalTime t = first_slot; t < window.analysis_end(); t += slot) {
      while (it != samples.end() && it->station_id == id && it->timestamp < t) ++it;
      bool present = it != samples.end() && it->station_id == id && it->timestamp == t;
      (t < window.split_instant() ? g.expected_slots_pre : g.expected_slots_during)++;
      if (present) {
        (t < window.split_instant() ? g.present_slots_pre : g.present_slots_during)++;
      } else {
        g.missing.push_back(t);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace noisescape
