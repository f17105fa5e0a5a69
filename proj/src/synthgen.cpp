#include "noisescape/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "noisescape/aggregate.hpp"
#include "noisescape/csv.hpp"
#include "noisescape/errors.hpp"

namespace noisescape {

using namespace std::chrono;
namespace pt = boost::property_tree;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

double level_at(const StationScenario& s, const ScenarioSpec& spec, LocalTime t) {
  const double days_elapsed =
      duration<double>(t - spec.window.analysis_start()).count() / duration<double>(days{1}).count();
  double level = s.base_db + s.band_offset_db[static_cast<std::size_t>(band_of(t, spec.bands))] +
                 s.drift_db_per_day * days_elapsed;
  if (s.step_at && t >= *s.step_at) level += s.step_db;
  return level;
}

std::optional<double> ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 3) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

StationTruth compute_truth(const StationScenario& s, const ScenarioSpec& spec,
                           const std::vector<std::pair<LocalTime, double>>& clean_levels) {
  StationTruth truth;
  truth.station_id = s.id;
  truth.step_at = s.step_at;
  truth.step_db = s.step_db;
  truth.drift_db_per_day = s.drift_db_per_day;
  truth.present_samples = static_cast<std::int64_t>(clean_levels.size());

  std::vector<HourlyMetrics> hourly;
  std::size_t i = 0;
  while (i < clean_levels.size()) {
    const auto hour = hour_floor(clean_levels[i].first);
    std::vector<double> levels;
    double max_level = -1e300, min_level = 1e300;
    for (; i < clean_levels.size() && hour_floor(clean_levels[i].first) == hour; ++i) {
      levels.push_back(clean_levels[i].second);
      max_level = std::max(max_level, clean_levels[i].second + s.lmax_excess_db);
      min_level = std::min(min_level, clean_levels[i].second);
    }
    hourly.push_back({s.id, hour, Decibel{energy_average(levels)}, Decibel{max_level}, Decibel{min_level},
                      static_cast<int>(levels.size())});
  }

  const LocalDate origin = civil_date(spec.window.analysis_start());
  for (TimeBand band : kAllBands) {
    const auto b = static_cast<std::size_t>(band);
    auto series = build_band_series(hourly, band, spec.bands);
    std::vector<double> x, avg, mx, mn;
    for (const auto& e : series.entries) {
      x.push_back(static_cast<double>((e.date - origin).count()));
      avg.push_back(e.avg.value());
      mx.push_back(e.max.value());
      mn.push_back(e.min.value());
    }
    truth.band_slope[b] = {ols_slope(x, avg), ols_slope(x, mx), ols_slope(x, mn)};

    for (Period period : {Period::Pre, Period::During}) {
      std::vector<double> levels;
      for (const auto& h : hourly)
        if (band_of(h.hour_start, spec.bands) == band && spec.window.contains(h.hour_start) &&
            period_of(h.hour_start, spec.window) == period)
          levels.push_back(h.avg.value());
      if (!levels.empty()) truth.band_mean[b][static_cast<std::size_t>(period)] = energy_average(levels);
    }
  }

  std::array<std::int64_t, 2> count{}, total{};
  for (const auto& h : hourly) {
    if (!spec.window.contains(h.hour_start)) continue;
    const auto p = static_cast<std::size_t>(period_of(h.hour_start, spec.window));
    ++total[p];
    count[p] += h.avg.value() > spec.threshold_db;
  }
  for (std::size_t p = 0; p < 2; ++p)
    if (total[p] > 0)
      truth.exceedance_pct[p] = 100.0 * static_cast<double>(count[p]) / static_cast<double>(total[p]);
  return truth;
}

}  // namespace

SynthOutput generate(const ScenarioSpec& spec) {
  SynthOutput out;
  std::string samples = "station_id,timestamp,leq_db,lmax_db\n";
  const auto slot = duration_cast<seconds>(kSlot);

  for (std::size_t idx = 0; idx < spec.stations.size(); ++idx) {
    const auto& s = spec.stations[idx];
    Rng rng(splitmix64(spec.seed + (idx + 1) * 0x9E3779B97F4A7C15ULL));
    const std::string id = csv::escape(s.id);
    std::vector<std::pair<LocalTime, double>> clean;

    for (LocalTime t = spec.window.analysis_start(); t < spec.window.analysis_end(); t += slot) {
      if (rng.uniform() < s.missing_prob) continue;
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      const double level = level_at(s, spec, t);
      clean.emplace_back(t, level);
      auto leq_tenths = std::llround((level + s.noise_sd_db * z1) * 10.0);
      leq_tenths = std::clamp<long long>(leq_tenths, 0, 1400);
      auto lmax_tenths = leq_tenths + std::llround((s.lmax_excess_db + s.noise_sd_db * std::fabs(z2)) * 10.0);
      lmax_tenths = std::clamp<long long>(lmax_tenths, leq_tenths, 1400);
      samples += fmt::format("{},{},{:.1f},{:.1f}\n", id, format_timestamp(t), static_cast<double>(leq_tenths) / 10.0,
                             static_cast<double>(lmax_tenths) / 10.0);
    }
    out.truth.push_back(compute_truth(s, spec, clean));
  }
  out.samples_csv = std::move(samples);

  const bool located = !spec.stations.empty() && std::all_of(spec.stations.begin(), spec.stations.end(),
                                                              [](const StationScenario& s) { return s.location; });
  if (located) {
    out.stations_csv = "station_id,name,lat,lon\n";
    for (const auto& s : spec.stations)
      out.stations_csv +=
          fmt::format("{},{},{},{}\n", csv::escape(s.id), csv::escape(s.name), s.location->lat, s.location->lon);
  }
  return out;
}

std::string SynthOutput::truth_json() const {
  using json = nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json stations = json::array();
  for (const auto& t : truth) {
    json j;
    j["station_id"] = t.station_id;
    j["step_at"] = t.step_at ? json(format_timestamp(*t.step_at)) : json(nullptr);
    j["step_date"] = t.step_at ? json(format_date(civil_date(*t.step_at))) : json(nullptr);
    j["step_db"] = t.step_db;
    j["drift_db_per_day"] = t.drift_db_per_day;
    json slopes, means;
    for (TimeBand band : kAllBands) {
      const auto b = static_cast<std::size_t>(band);
      const std::string name(to_string(band));
      slopes[name] = {{"avg", opt(t.band_slope[b][0])}, {"max", opt(t.band_slope[b][1])}, {"min", opt(t.band_slope[b][2])}};
      means[name] = {{"pre", opt(t.band_mean[b][0])}, {"during", opt(t.band_mean[b][1])}};
    }
    j["band_slope_db_per_day"] = slopes;
    j["band_mean_db"] = means;
    j["exceedance_pct"] = {{"pre", opt(t.exceedance_pct[0])}, {"during", opt(t.exceedance_pct[1])}};
    j["present_samples"] = t.present_samples;
    stations.push_back(j);
  }
  json root;
  root["stations"] = stations;
  return root.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Scenario text
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kSectionPrefix = "station:";

double get_double(const pt::ptree& node, const std::string& key, double fallback) {
  auto v = node.get_optional<std::string>(key);
  if (!v) return fallback;
  auto d = csv::parse_double(*v);
  if (!d) throw InputError(fmt::format("scenario: invalid number '{}' for '{}'", *v, key));
  return *d;
}

LocalTime get_time(const pt::ptree& node, const std::string& key, LocalTime fallback) {
  auto v = node.get_optional<std::string>(key);
  if (!v) return fallback;
  auto t = parse_timestamp(*v);
  if (!t) throw InputError(fmt::format("scenario: invalid timestamp '{}' for '{}'", *v, key));
  return *t;
}

const std::set<std::string> kGlobalKeys = {"seed", "analysis_start", "split_instant", "analysis_end", "threshold_db"};
const std::set<std::string> kStationKeys = {
    "name",          "lat",     "lon",     "base_db",     "night_offset_db", "day_offset_db", "evening_offset_db",
    "drift_db_per_day", "step_at", "step_db", "noise_sd_db", "missing_prob",    "lmax_excess_db"};

}  // namespace

ScenarioSpec parse_scenario(std::istream& in) {
  if (!in) throw InputError("scenario: cannot read input");
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
    throw InputError(fmt::format("scenario: {}", e.what()));
  }

  ScenarioSpec spec;
  LocalTime start = spec.window.analysis_start(), split = spec.window.split_instant(),
            end = spec.window.analysis_end();
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      if (!kGlobalKeys.count(key)) throw InputError(fmt::format("scenario: unknown key '{}'", key));
      continue;
    }
    if (key.rfind(kSectionPrefix, 0) != 0) throw InputError(fmt::format("scenario: unknown section '[{}]'", key));
    for (const auto& [k, _] : node)
      if (!kStationKeys.count(k)) throw InputError(fmt::format("scenario: unknown station key '{}'", k));

    StationScenario s;
    s.id = key.substr(kSectionPrefix.size());
    if (s.id.empty()) throw InputError("scenario: empty station id");
    s.name = node.get<std::string>("name", s.id);
    if (node.count("lat") || node.count("lon")) {
      GeoPoint p{get_double(node, "lat", 0.0), get_double(node, "lon", 0.0)};
      if (!p.is_valid()) throw InputError(fmt::format("scenario: station {} has an invalid location", s.id));
      s.location = p;
    }
    s.base_db = get_double(node, "base_db", s.base_db);
    s.band_offset_db = {get_double(node, "night_offset_db", 0.0), get_double(node, "day_offset_db", 0.0),
                        get_double(node, "evening_offset_db", 0.0)};
    s.drift_db_per_day = get_double(node, "drift_db_per_day", 0.0);
    if (node.count("step_at")) s.step_at = get_time(node, "step_at", LocalTime{});
    s.step_db = get_double(node, "step_db", 0.0);
    s.noise_sd_db = get_double(node, "noise_sd_db", 0.0);
    s.missing_prob = get_double(node, "missing_prob", 0.0);
    s.lmax_excess_db = get_double(node, "lmax_excess_db", s.lmax_excess_db);
    if (s.noise_sd_db < 0 || s.missing_prob < 0 || s.missing_prob > 1 || s.lmax_excess_db < 0)
      throw InputError(fmt::format("scenario: station {} has a negative spread or invalid probability", s.id));
    spec.stations.push_back(std::move(s));
  }

  if (auto seed = tree.get_optional<std::string>("seed")) {
    try {
      std::size_t used = 0;
      spec.seed = std::stoull(*seed, &used);
      if (used != seed->size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InputError(fmt::format("scenario: invalid seed '{}'", *seed));
    }
  }
  start = get_time(tree, "analysis_start", start);
  split = get_time(tree, "split_instant", split);
  end = get_time(tree, "analysis_end", end);
  try {
    spec.window = PeriodSplit(start, split, end);
  } catch (const std::invalid_argument& e) {
    throw InputError(fmt::format("scenario: {}", e.what()));
  }
  spec.threshold_db = get_double(tree, "threshold_db", spec.threshold_db);
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open scenario file '{}'", path));
  return parse_scenario(in);
}

std::string to_text(const ScenarioSpec& spec) {
  std::string out;
  out += fmt::format("seed = {}\n", spec.seed);
  out += fmt::format("analysis_start = {}\n", format_timestamp(spec.window.analysis_start()));
  out += fmt::format("split_instant = {}\n", format_timestamp(spec.window.split_instant()));
  out += fmt::format("analysis_end = {}\n", format_timestamp(spec.window.analysis_end()));
  out += fmt::format("threshold_db = {}\n", spec.threshold_db);
  for (const auto& s : spec.stations) {
    out += fmt::format("\n[{}{}]\n", kSectionPrefix, s.id);
    out += fmt::format("name = {}\n", s.name);
    if (s.location) out += fmt::format("lat = {}\nlon = {}\n", s.location->lat, s.location->lon);
    out += fmt::format("base_db = {}\n", s.base_db);
    out += fmt::format("night_offset_db = {}\nday_offset_db = {}\nevening_offset_db = {}\n", s.band_offset_db[0],
                       s.band_offset_db[1], s.band_offset_db[2]);
    out += fmt::format("drift_db_per_day = {}\n", s.drift_db_per_day);
    if (s.step_at) out += fmt::format("step_at = {}\nstep_db = {}\n", format_timestamp(*s.step_at), s.step_db);
    out += fmt::format("noise_sd_db = {}\nmissing_prob = {}\nlmax_excess_db = {}\n", s.noise_sd_db, s.missing_prob,
                       s.lmax_excess_db);
  }
  return out;
}

ScenarioSpec golden_scenario(std::uint64_t seed) {
  struct Row {
    const char* id;
    const char* name;
    double lat, lon_w;
    const char* step_date;
    double base, night, day, evening, step, drift, sd, missing, excess;
  };
  // Names and coordinates of the Dublin monitoring network; levels are synthetic.
  static constexpr Row rows[] = {
      {"1", "Ballyfermot Civic Office", 53.343, 6.362, "2020-03-19", 59.5, -3.0, 1.0, 2.0, -8, -0.004, 1.0, 0.01, 8},
      {"2", "Ballymun Library", 53.390, 6.265, "2020-03-21", 63.5, -2.5, 1.0, 2.0, -7, -0.004, 0.8, 0.02, 9},
      {"3", "Blessington Street Basin", 53.357, 6.270, "2020-03-16", 57.0, -3.0, 1.0, 2.0, -8, -0.005, 1.0, 0.0, 7},
      {"4", "Chancery Park", 53.347, 6.272, "2020-03-15", 66.0, -2.5, 1.0, 2.0, -7, -0.003, 0.8, 0.01, 10},
      {"5", "DCC Rowing Club", 53.346, 6.320, "2020-03-15", 60.0, -3.0, 1.0, 3.0, -9, -0.004, 1.0, 0.03, 8},
      {"6", "Dolphin's Barn", 53.331, 6.292, "2020-03-16", 60.0, -2.5, -0.5, 3.5, -6, -0.004, 0.8, 0.01, 8},
      {"7", "Drumcondra Library", 53.370, 6.259, "2020-03-15", 55.5, -2.5, 2.0, 1.0, -8, -0.004, 1.0, 0.02, 6},
      {"8", "Mellows Park", 53.391, 6.304, "2020-03-29", 62.0, -2.0, 1.0, 1.5, -6, -0.004, 0.8, 0.0, 9},
      {"9", "Navan Road", 53.371, 6.326, "2020-03-25", 60.0, -3.0, 1.0, 3.0, -9, -0.005, 1.0, 0.01, 8},
      {"10", "Raheny Library", 53.380, 6.173, "2020-03-22", 59.5, -2.5, 1.5, 2.5, -8, -0.004, 1.0, 0.02, 7},
      {"11", "Walkinstown Library", 53.319, 6.322, "2020-03-15", 57.0, -3.0, 1.5, 0.5, -8, -0.004, 0.8, 0.01, 8},
      {"12", "Woodstock Gardens", 53.324, 6.248, "2020-03-17", 54.0, -2.5, 2.5, -0.5, -8, -0.003, 1.0, 0.0, 6},
  };
  ScenarioSpec spec;
  spec.seed = seed;
  for (const auto& r : rows) {
    StationScenario s;
    s.id = r.id;
    s.name = r.name;
    s.location = GeoPoint::from_degrees_west(r.lat, r.lon_w);
    s.base_db = r.base;
    s.band_offset_db = {r.night, r.day, r.evening};
    s.drift_db_per_day = r.drift;
    s.step_at = LocalTime{*parse_date(r.step_date)};
    s.step_db = r.step;
    s.noise_sd_db = r.sd;
    s.missing_prob = r.missing;
    s.lmax_excess_db = r.excess;
    spec.stations.push_back(std::move(s));
  }
  return spec;
}

}  // namespace noisescape
