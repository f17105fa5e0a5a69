#include <doctest.h>

#include <sstream>

#include "noisescape/errors.hpp"
#include "noisescape/ingest.hpp"

using namespace noisescape;

namespace {

SampleBatch parse(const std::string& text) {
  std::istringstream in(text);
  return parse_samples(in);
}

LocalTime at(const char* text) { return *parse_timestamp(text); }

}  // namespace

TEST_CASE("clean rows are accepted and sorted") {
  auto b = parse(
      "station_id,timestamp,leq_db,lmax_db\n"
      "10,2020-01-01T00:05,55.0,60.0\n"
      "2,2020-01-01T00:05,51.0,58.0\n"
      "2,2020-01-01T00:00,50.0,57.5\n");
  CHECK(b.report.rows_read == 3);
  CHECK(b.report.rows_accepted == 3);
  CHECK(b.report.flags.empty());
  REQUIRE(b.samples.size() == 3);
  CHECK(b.samples[0].station_id == "2");
  CHECK(b.samples[0].timestamp == at("2020-01-01T00:00"));
  CHECK(b.samples[1].leq.value() == 51.0);
  CHECK(b.samples[2].station_id == "10");
}

TEST_CASE("bad rows are flagged with line and reason") {
  auto b = parse(
      "station_id,timestamp,leq_db,lmax_db\n"
      "1,2020-01-01T00:00,50,60\n"
      "1,2020-01-01T00:05,abc,60\n"
      "1,2020-01-01T00:10,150,160\n"
      "1,2020-01-01T00:15,62,58\n"
      "1,2020-01-01T00:22,50,60\n"
      "1,2020-01-01T00:00,50,60\n"
      "1,2020-01-01T00:00,51,60\n"
      "1,2020-01-01\n");
  CHECK(b.report.rows_read == 8);
  CHECK(b.report.rows_accepted == 1);
  REQUIRE(b.report.flags.size() == 7);
  CHECK(b.report.flags[0].line == 3);
  CHECK(b.report.flags[0].reason == FlagReason::Malformed);
  CHECK(b.report.flags[1].reason == FlagReason::OutOfRange);
  CHECK(b.report.flags[2].reason == FlagReason::LmaxBelowLeq);
  CHECK(b.report.flags[3].reason == FlagReason::MisalignedTimestamp);
  CHECK(b.report.flags[4].reason == FlagReason::Duplicate);
  CHECK(b.report.flags[4].detail == "exact duplicate");
  CHECK(b.report.flags[5].reason == FlagReason::Duplicate);
  CHECK(b.report.flags[5].detail == "conflicting values for the same slot");
  CHECK(b.report.flags[6].reason == FlagReason::Malformed);
  CHECK(b.report.flags[6].text == "1,2020-01-01");
  CHECK(b.report.rows_accepted + b.report.rows_flagged() == b.report.rows_read);
}

TEST_CASE("small clock drift is snapped onto the slot") {
  auto b = parse("1,2020-01-01T00:04:10,50,60\n1,2020-01-01T00:10:59,50,60\n1,2020-01-01T00:16:01,50,60\n");
  REQUIRE(b.samples.size() == 2);
  CHECK(b.samples[0].timestamp == at("2020-01-01T00:05"));
  CHECK(b.samples[1].timestamp == at("2020-01-01T00:10"));
  REQUIRE(b.report.flags.size() == 1);
  CHECK(b.report.flags[0].reason == FlagReason::MisalignedTimestamp);
}

TEST_CASE("CRLF, blank lines and quoted fields") {
  auto b = parse("station_id,timestamp,leq_db,lmax_db\r\n\r\n\"1\",2020-01-01T00:00,50,60\r\n");
  REQUIRE(b.samples.size() == 1);
  CHECK(b.samples[0].station_id == "1");
}

TEST_CASE("write_samples round trips") {
  auto b = parse("1,2020-01-01T00:00,50.1,60.25\n2,2020-01-01T00:05,49.9,51\n");
  std::ostringstream out;
  write_samples(out, b.samples);
  auto again = parse(out.str());
  CHECK(again.samples == b.samples);
}

TEST_CASE("stations: signed east and degrees-west headers") {
  std::istringstream east("station_id,name,lat,lon\n1,Ballyfermot Civic Office,53.343,-6.362\n");
  auto a = load_stations(east);
  REQUIRE(a.items.size() == 1);
  CHECK(a.items[0].location.lon == -6.362);

  std::istringstream west("station_id,name,lat,lon_w\n2,Ballymun Library,53.390,6.265\n1,Ballyfermot Civic Office,53.343,6.362\n");
  auto w = load_stations(west);
  REQUIRE(w.items.size() == 2);
  CHECK(w.items[0].id == "1");
  CHECK(w.items[0].location.lon == -6.362);
  CHECK(w.items[1].location.lat == 53.390);
}

TEST_CASE("stations: duplicate id is fatal, bad coordinates are flagged") {
  std::istringstream dup("1,a,53,-6\n1,b,53,-6\n");
  CHECK_THROWS_AS(load_stations(dup), InputError);
  std::istringstream bad("1,a,95,-6\n2,b,x,-6\n3,c,53,-6\n");
  auto r = load_stations(bad);
  CHECK(r.items.size() == 1);
  REQUIRE(r.flags.size() == 2);
  CHECK(r.flags[0].reason == FlagReason::OutOfRange);
  CHECK(r.flags[1].reason == FlagReason::Malformed);
}

TEST_CASE("traffic and schools") {
  std::istringstream t("lat,lon,night_count,day_count,evening_count\n53.343,-6.362,658.5,2018.1,6877.6\n53,-6,-1,2,3\n");
  auto traffic = load_traffic(t);
  REQUIRE(traffic.items.size() == 1);
  CHECK(traffic.items[0].count(TimeBand::Night) == 658.5);
  CHECK(traffic.items[0].count(TimeBand::Day) == 2018.1);
  CHECK(traffic.items[0].count(TimeBand::Evening) == 6877.6);
  CHECK(traffic.flags.size() == 1);

  std::istringstream s("name,lat,lon\n\"St. Mary's, Primary\",53.34,-6.36\n");
  auto schools = load_schools(s);
  REQUIRE(schools.items.size() == 1);
  CHECK(schools.items[0].name == "St. Mary's, Primary");
}

TEST_CASE("gap audit on a gapless fixture matches calendar hours") {
  auto window = PeriodSplit::lockdown_2020();
  std::vector<NoiseSample> samples;
  for (auto t = window.analysis_start(); t < window.analysis_end(); t += kSlot)
    samples.push_back({"1", t, Decibel(50), Decibel(55)});
  std::vector<std::string> ids{"1", "2"};
  auto gaps = audit_gaps(samples, window, ids);
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[0].missing.empty());
  CHECK(gaps[0].expected_hours(Period::Pre) == 2016);
  CHECK(gaps[0].expected_hours(Period::During) == 1152);
  CHECK(gaps[0].present_slots_pre == 2016 * 12);
  CHECK(gaps[1].missing.size() == (2016 + 1152) * 12);  // station without data
}

TEST_CASE("gap audit lists each missing slot") {
  PeriodSplit window(at("2020-01-01T00:00"), at("2020-01-01T01:00"), at("2020-01-01T02:00"));
  std::vector<NoiseSample> samples;
  for (auto t = window.analysis_start(); t < window.analysis_end(); t += kSlot)
    if (t != at("2020-01-01T00:20") && t != at("2020-01-01T01:30")) samples.push_back({"7", t, Decibel(50), Decibel(55)});
  auto gaps = audit_gaps(samples, window, {});
  REQUIRE(gaps.size() == 1);
  REQUIRE(gaps[0].missing.size() == 2);
  CHECK(gaps[0].missing[0] == at("2020-01-01T00:20"));
  CHECK(gaps[0].missing[1] == at("2020-01-01T01:30"));
  CHECK(gaps[0].present_slots_pre == 11);
  CHECK(gaps[0].present_slots_during == 11);
}

TEST_CASE("unreadable stream is an input error") {
  std::istringstream in;
  in.setstate(std::ios::failbit);
  CHECK_THROWS_AS(parse_samples(in), InputError);
}
