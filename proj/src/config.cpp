#include "noisescape/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "noisescape/csv.hpp"
#include "noisescape/errors.hpp"

namespace noisescape {

namespace pt = boost::property_tree;

std::string_view to_string(TrendGranularity granularity) {
  return granularity == TrendGranularity::BandDaily ? "band-daily" : "hourly";
}

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw InputError(fmt::format("config: invalid value '{}' for key '{}'", value, key));
}

double to_double(std::string_view key, const std::string& v) {
  auto d = csv::parse_double(v);
  if (!d) bad_value(key, v);
  return *d;
}

std::size_t to_count(std::string_view key, const std::string& v) {
  auto d = csv::parse_double(v);
  if (!d || *d < 0 || *d != static_cast<double>(static_cast<std::size_t>(*d))) bad_value(key, v);
  return static_cast<std::size_t>(*d);
}

int to_hour(std::string_view key, const std::string& v) {
  auto n = to_count(key, v);
  if (n > 23) bad_value(key, v);
  return static_cast<int>(n);
}

LocalTime to_time(std::string_view key, const std::string& v) {
  auto t = parse_timestamp(v);
  if (!t) bad_value(key, v);
  return *t;
}

std::vector<std::string> to_list(const std::string& v) {
  std::vector<std::string> out;
  for (auto& f : csv::split_record(v))
    if (!f.empty()) out.push_back(f);
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

struct KeyInfo {
  const char* key;
  const char* help;
};

constexpr KeyInfo kKeys[] = {
    {"analysis_start", "start of the analysis window (local time); default 2020-01-01T00:00, first monitored day"},
    {"split_instant", "first instant of the 'during' period; default 2020-03-25T00:00, lockdown start"},
    {"analysis_end", "end of the window, exclusive; default 2020-05-12T00:00, i.e. through 11 May 2020"},
    {"threshold_db", "exceedance threshold, strict '>' ; default 55, the WHO guideline level"},
    {"radius_m", "station neighbourhood radius for traffic/school joins; default 500"},
    {"day_start_hour", "first hour of the day band; default 7 (day is 7 AM to 7 PM)"},
    {"evening_start_hour", "first hour of the evening band; default 19 (evening is 7 PM to 11 PM)"},
    {"night_start_hour", "first hour of the night band; default 23 (night is 11 PM to 7 AM)"},
    {"max_lag", "largest lag of the linearity cross-correlation; default 50"},
    {"linearity_mode", "strict (every lag inside +-1.96/sqrt(n)) or fraction95; default strict"},
    {"alpha", "two-sided significance level of the slope test; default 0.05"},
    {"cp_min_segment_length", "shortest segment a change point may leave; default 5"},
    {"cp_variance_floor", "lower bound on a segment variance in dB^2; default 1e-8"},
    {"cp_params_per_change", "d in the BIC penalty d*log(n); default 3 (location, mean, variance)"},
    {"cp_mode", "single (one change per station) or multiple; default single"},
    {"coverage_mode", "inclusive or strict (drop hours with fewer than 6 of 12 samples); default inclusive"},
    {"trend_granularity", "band-daily (slopes in dB/day) or hourly (dB/hour); default band-daily"},
    {"city_center_stations", "comma-separated station ids labelled city-center in the traffic fits; default empty"},
};

}  // namespace

AnalysisConfig parse_config(std::istream& in) {
  if (!in) throw InputError("config: cannot read input");
  std::ostringstream filtered;
  std::string line;
  while (csv::read_line(in, line)) {
    auto pos = line.find_first_not_of(" \t");
    if (pos != std::string::npos && line[pos] == '#') continue;
    filtered << line << '\n';
  }

  pt::ptree tree;
  try {
    std::istringstream src(filtered.str());
    pt::read_ini(src, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError(fmt::format("config: {}", e.what()));
  }

  AnalysisConfig c;
  LocalTime start = c.split.analysis_start(), split = c.split.split_instant(), end = c.split.analysis_end();

  const std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"analysis_start", [&](const std::string& v) { start = to_time("analysis_start", v); }},
      {"split_instant", [&](const std::string& v) { split = to_time("split_instant", v); }},
      {"analysis_end", [&](const std::string& v) { end = to_time("analysis_end", v); }},
      {"threshold_db", [&](const std::string& v) { c.threshold_db = to_double("threshold_db", v); }},
      {"radius_m",
       [&](const std::string& v) {
         c.radius_m = to_double("radius_m", v);
         if (c.radius_m < 0) bad_value("radius_m", v);
       }},
      {"day_start_hour", [&](const std::string& v) { c.bands.day_start = to_hour("day_start_hour", v); }},
      {"evening_start_hour", [&](const std::string& v) { c.bands.evening_start = to_hour("evening_start_hour", v); }},
      {"night_start_hour", [&](const std::string& v) { c.bands.night_start = to_hour("night_start_hour", v); }},
      {"max_lag", [&](const std::string& v) { c.max_lag = to_count("max_lag", v); }},
      {"linearity_mode",
       [&](const std::string& v) {
         auto m = parse_linearity_mode(v);
         if (!m) bad_value("linearity_mode", v);
         c.linearity_mode = *m;
       }},
      {"alpha",
       [&](const std::string& v) {
         c.alpha = to_double("alpha", v);
         if (!(c.alpha > 0 && c.alpha < 1)) bad_value("alpha", v);
       }},
      {"cp_min_segment_length",
       [&](const std::string& v) {
         c.changepoint.min_segment_length = to_count("cp_min_segment_length", v);
         if (c.changepoint.min_segment_length == 0) bad_value("cp_min_segment_length", v);
       }},
      {"cp_variance_floor",
       [&](const std::string& v) {
         c.changepoint.variance_floor = to_double("cp_variance_floor", v);
         if (!(c.changepoint.variance_floor > 0)) bad_value("cp_variance_floor", v);
       }},
      {"cp_params_per_change",
       [&](const std::string& v) {
         c.changepoint.params_per_change = to_double("cp_params_per_change", v);
         if (c.changepoint.params_per_change < 0) bad_value("cp_params_per_change", v);
       }},
      {"cp_mode",
       [&](const std::string& v) {
         if (v == "single")
           c.changepoint_mode = ChangePointMode::Single;
         else if (v == "multiple")
           c.changepoint_mode = ChangePointMode::Multiple;
         else
           bad_value("cp_mode", v);
       }},
      {"coverage_mode",
       [&](const std::string& v) {
         auto m = parse_coverage_mode(v);
         if (!m) bad_value("coverage_mode", v);
         c.coverage_mode = *m;
       }},
      {"trend_granularity",
       [&](const std::string& v) {
         if (v == "band-daily")
           c.trend_granularity = TrendGranularity::BandDaily;
         else if (v == "hourly")
           c.trend_granularity = TrendGranularity::Hourly;
         else
           bad_value("trend_granularity", v);
       }},
      {"city_center_stations", [&](const std::string& v) { c.city_center_stations = to_list(v); }},
  };

  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw InputError(fmt::format("config: sections are not supported ('[{}]')", key));
    auto it = setters.find(key);
    if (it == setters.end()) throw InputError(fmt::format("config: unknown key '{}'", key));
    it->second(node.data());
  }

  try {
    c.split = PeriodSplit(start, split, end);
  } catch (const std::invalid_argument& e) {
    throw InputError(fmt::format("config: {}", e.what()));
  }
  if (!c.bands.is_valid()) throw InputError("config: band start hours must satisfy day < evening < night");
  return c;
}

AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config file '{}'", path));
  return parse_config(in);
}

std::string to_text(const AnalysisConfig& c) {
  std::string out;
  auto put = [&](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
  put("analysis_start", format_timestamp(c.split.analysis_start()));
  put("split_instant", format_timestamp(c.split.split_instant()));
  put("analysis_end", format_timestamp(c.split.analysis_end()));
  put("threshold_db", fmt::format("{}", c.threshold_db));
  put("radius_m", fmt::format("{}", c.radius_m));
  put("day_start_hour", fmt::format("{}", c.bands.day_start));
  put("evening_start_hour", fmt::format("{}", c.bands.evening_start));
  put("night_start_hour", fmt::format("{}", c.bands.night_start));
  put("max_lag", fmt::format("{}", c.max_lag));
  put("linearity_mode", std::string(to_string(c.linearity_mode)));
  put("alpha", fmt::format("{}", c.alpha));
  put("cp_min_segment_length", fmt::format("{}", c.changepoint.min_segment_length));
  put("cp_variance_floor", fmt::format("{}", c.changepoint.variance_floor));
  put("cp_params_per_change", fmt::format("{}", c.changepoint.params_per_change));
  put("cp_mode", std::string(to_string(c.changepoint_mode)));
  put("coverage_mode", std::string(to_string(c.coverage_mode)));
  put("trend_granularity", std::string(to_string(c.trend_granularity)));
  put("city_center_stations", join(c.city_center_stations));
  return out;
}

std::string config_help() {
  std::string out = "Config keys (key = value, one per line; '#' starts a comment):\n";
  for (const auto& k : kKeys) out += fmt::format("  {:<22} {}\n", k.key, k.help);
  return out;
}

}  // namespace noisescape
