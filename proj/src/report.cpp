#include "noisescape/report.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "noisescape/aggregate.hpp"
#include "noisescape/csv.hpp"
#include "noisescape/errors.hpp"

namespace noisescape {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view to_string(Step step) {
  switch (step) {
    case Step::Ingest: return "ingest";
    case Step::Aggregate: return "aggregate";
    case Step::Trend: return "trend";
    case Step::ChangePoint: return "changepoint";
    case Step::Linearity: return "linearity";
    case Step::Exceedance: return "exceedance";
    case Step::Spatial: return "spatial";
  }
  return "?";
}

std::vector<Step> steps_for(std::string_view subcommand) {
  using enum Step;
  if (subcommand == "ingest-check") return {Ingest};
  if (subcommand == "aggregate") return {Ingest, Aggregate};
  if (subcommand == "trend") return {Ingest, Aggregate, Trend};
  if (subcommand == "changepoint") return {Ingest, Aggregate, ChangePoint};
  if (subcommand == "linearity") return {Ingest, Aggregate, Linearity};
  if (subcommand == "exceedance") return {Ingest, Aggregate, Exceedance};
  if (subcommand == "spatial") return {Spatial};
  if (subcommand == "report") return {Ingest, Aggregate, Spatial, Trend, ChangePoint, Linearity, Exceedance};
  return {};
}

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) { return fmt::format("{}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string("NA"); }

std::string cell(std::string_view text) { return csv::escape(text); }

std::ifstream open_input(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open {} file '{}'", what, path));
  return in;
}

// Station-id text safe to use in a file name.
std::string file_token(std::string_view id) {
  std::string out;
  for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

template <typename Fn>
void for_each_station(std::span<const HourlyMetrics> hourly, Fn&& fn) {
  std::size_t i = 0;
  while (i < hourly.size()) {
    std::size_t j = i;
    while (j < hourly.size() && hourly[j].station_id == hourly[i].station_id) ++j;
    fn(hourly.subspan(i, j - i));
    i = j;
  }
}

std::vector<double> band_levels(std::span<const HourlyMetrics> station, TimeBand band, const BandBoundaries& bounds) {
  std::vector<double> out;
  for (const auto& h : station)
    if (band_of(h.hour_start, bounds) == band) out.push_back(h.avg.value());
  return out;
}

class Run {
 public:
  Run(const AnalysisConfig& config, const InputPaths& inputs, fs::path out_dir, PipelineResult& result)
      : config_(config), inputs_(inputs), dir_(std::move(out_dir)), r_(result) {}

  void execute(const std::vector<Step>& requested) {
    std::set<Step> want(requested.begin(), requested.end());
    if (want.contains(Step::Trend) || want.contains(Step::ChangePoint) || want.contains(Step::Linearity) ||
        want.contains(Step::Exceedance))
      want.insert({Step::Ingest, Step::Aggregate});
    if (want.contains(Step::Aggregate)) want.insert(Step::Ingest);

    constexpr Step kOrder[] = {Step::Ingest,      Step::Aggregate, Step::Spatial,   Step::Trend,
                               Step::ChangePoint, Step::Linearity, Step::Exceedance};
    for (Step s : kOrder)
      if (want.contains(s)) status_.push_back({s, "pending", ""});

    fs::create_directories(dir_);
    for (auto& st : status_) {
      try {
        run_step(st.step);
        st.status = "ok";
      } catch (const InputError& e) {
        fail(st, kExitInputError, e.what());
        break;
      } catch (const std::exception& e) {
        fail(st, kExitAnalysisError, e.what());
        break;
      }
    }
    for (auto& st : status_)
      if (st.status == "pending") st.status = "not-run";
    write_manifest();
  }

 private:
  struct StepStatus {
    Step step;
    std::string status;
    std::string message;
  };

  void fail(StepStatus& st, int code, const std::string& message) {
    st.status = "failed";
    st.message = message;
    r_.exit_code = code;
    r_.failed_step = std::string(to_string(st.step));
    r_.error = message;
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    r_.files.push_back(name);
  }

  void run_step(Step step) {
    switch (step) {
      case Step::Ingest: return ingest();
      case Step::Aggregate: return aggregate();
      case Step::Trend: return trend();
      case Step::ChangePoint: return changepoint();
      case Step::Linearity: return linearity();
      case Step::Exceedance: return exceedance();
      case Step::Spatial: return spatial();
    }
  }

  void load_station_file() {
    if (inputs_.stations.empty() || stations_loaded_) return;
    auto in = open_input(inputs_.stations, "stations");
    auto loaded = load_stations(in);
    r_.stations = std::move(loaded.items);
    for (auto& f : loaded.flags) other_flags_.push_back({"stations", std::move(f)});
    stations_loaded_ = true;
  }

  const Station* station(const std::string& id) const {
    for (const auto& s : r_.stations)
      if (s.id == id) return &s;
    return nullptr;
  }

  // ---------------------------------------------------------------- ingest

  void ingest() {
    if (inputs_.samples.empty()) throw InputError("no samples file given (--samples)");
    auto in = open_input(inputs_.samples, "samples");
    auto batch = parse_samples(in);
    r_.ingest = std::move(batch.report);
    load_station_file();

    std::size_t outside = 0;
    for (auto& s : batch.samples) {
      if (config_.split.contains(s.timestamp))
        samples_.push_back(std::move(s));
      else
        ++outside;
    }
    if (outside) warnings_.push_back(fmt::format("{} samples outside the analysis window were ignored", outside));
    if (samples_.empty()) throw InputError(fmt::format("'{}' holds no valid samples inside the analysis window",
                                                       inputs_.samples));

    std::set<std::string, StationOrder> ids;
    for (const auto& s : r_.stations) ids.insert(s.id);
    for (auto& id : station_ids_of(samples_)) ids.insert(id);
    station_ids_.assign(ids.begin(), ids.end());
    r_.gaps = audit_gaps(samples_, config_.split, station_ids_);

    std::string flags = "file,line,reason,detail,text\n";
    for (const auto& f : r_.ingest.flags)
      flags += fmt::format("samples,{},{},{},{}\n", f.line, to_string(f.reason), cell(f.detail), cell(f.text));
    for (const auto& [file, f] : other_flags_)
      flags += fmt::format("{},{},{},{},{}\n", file, f.line, to_string(f.reason), cell(f.detail), cell(f.text));
    write("ingest_flags.csv", flags);

    std::string summary =
        "station_id,expected_slots_pre,present_slots_pre,expected_slots_during,present_slots_during,missing_slots\n";
    std::string runs = "station_id,gap_start,gap_end,missing_slots\n";
    for (const auto& g : r_.gaps) {
      summary += fmt::format("{},{},{},{},{},{}\n", cell(g.station_id), g.expected_slots_pre, g.present_slots_pre,
                             g.expected_slots_during, g.present_slots_during, g.missing.size());
      std::size_t i = 0;
      while (i < g.missing.size()) {
        std::size_t j = i + 1;
        while (j < g.missing.size() && g.missing[j] - g.missing[j - 1] == kSlot) ++j;
        runs += fmt::format("{},{},{},{}\n", cell(g.station_id), format_timestamp(g.missing[i]),
                            format_timestamp(g.missing[j - 1] + kSlot), j - i);
        i = j;
      }
    }
    write("gap_summary.csv", summary);
    write("gaps.csv", runs);
  }

  // ------------------------------------------------------------- aggregate

  void aggregate() {
    r_.hourly = hourly_series(samples_, config_.coverage_mode);
    if (r_.hourly.empty()) throw InputError("no hourly metrics could be formed from the samples");

    std::string hourly = "station_id,hour_start,avg_db,max_db,min_db,n_samples,low_coverage\n";
    for (const auto& h : r_.hourly)
      hourly += fmt::format("{},{},{},{},{},{},{}\n", cell(h.station_id), format_timestamp(h.hour_start),
                            num(h.avg.value()), num(h.max.value()), num(h.min.value()), h.n_samples,
                            h.low_coverage() ? 1 : 0);
    write("hourly.csv", hourly);

    std::string series = "station_id,band,date,avg_db,max_db,min_db,n_hours\n";
    std::string pct = "station_id,period,metric,band,n_hours,p5,p25,p50,p75,p95\n";
    for_each_station(r_.hourly, [&](std::span<const HourlyMetrics> station) {
      for (TimeBand band : kAllBands) {
        auto s = build_band_series(station, band, config_.bands);
        for (const auto& e : s.entries)
          series += fmt::format("{},{},{},{},{},{},{}\n", cell(s.station_id), to_string(band), format_date(e.date),
                                num(e.avg.value()), num(e.max.value()), num(e.min.value()), e.n_hours);
        r_.band_series.push_back(std::move(s));
      }
      for (Period p : {Period::Pre, Period::During}) {
        for (Metric metric : kAllMetrics) {
          std::array<std::vector<double>, 3> by_band;
          std::vector<double> all;
          for (const auto& h : station) {
            if (period_of(h.hour_start, config_.split) != p) continue;
            const double v = metric == Metric::Avg ? h.avg.value() : metric == Metric::Max ? h.max.value() : h.min.value();
            all.push_back(v);
            by_band[static_cast<std::size_t>(band_of(h.hour_start, config_.bands))].push_back(v);
          }
          auto row = [&](std::string_view label, const std::vector<double>& v) {
            if (v.empty()) return;
            auto q = percentile_summary(v);
            pct += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", cell(station.front().station_id), to_string(p),
                               to_string(metric), label, v.size(), num(q.p5), num(q.p25), num(q.p50), num(q.p75),
                               num(q.p95));
          };
          row("all", all);
          for (TimeBand band : kAllBands) row(to_string(band), by_band[static_cast<std::size_t>(band)]);
        }
      }
    });
    write("figure5_band_series.csv", series);
    write("figure3_percentiles.csv", pct);
  }

  // ----------------------------------------------------------------- trend

  void trend() {
    if (config_.trend_granularity == TrendGranularity::BandDaily)
      r_.trends = band_trends(r_.band_series, civil_date(config_.split.analysis_start()), config_.alpha);
    else
      r_.trends = hourly_band_trends(r_.hourly, config_.split.analysis_start(), config_.bands, config_.alpha);

    std::string out = fmt::format(
        "station_id,band,metric,slope_db_per_{},intercept_db,slope_se,t_stat,p_value,significant,decreasing,n,"
        "r_squared,status\n",
        config_.trend_granularity == TrendGranularity::BandDaily ? "day" : "hour");
    for (const auto& c : r_.trends) {
      out += fmt::format("{},{},{},", cell(c.station_id), to_string(c.band), to_string(c.metric));
      if (c.result) {
        const auto& t = *c.result;
        out += fmt::format("{},{},{},{},{},{},{},{},{},ok\n", num(t.slope), num(t.intercept), num(t.slope_se),
                           num(t.t_stat), num(t.p_value), t.significant ? 1 : 0, c.decreasing() ? 1 : 0, t.n,
                           num(t.r_squared()));
      } else {
        out += fmt::format("NA,NA,NA,NA,NA,NA,NA,0,NA,{}\n", cell(c.unavailable_reason));
      }
    }
    write("table2_trends.csv", out);
  }

  // ----------------------------------------------------------- changepoint

  void changepoint() {
    r_.changepoints = changepoint_report(r_.hourly, config_.changepoint, config_.changepoint_mode);

    std::map<std::string, std::size_t> schools;
    for (const auto& s : r_.schools) schools[s.station_id] = s.count;

    std::string table =
        "station_id,name,lat,lon,schools_within_radius,n_hours,verdict,change_at,change_date,tau,"
        "cost_unsplit,best_objective,penalty,status\n";
    std::string curves = "station_id,tau,hour_start,objective\n";
    std::string multiple = "station_id,index,change_at,change_date\n";
    for (const auto& c : r_.changepoints) {
      const Station* st = station(c.station_id);
      auto school = schools.find(c.station_id);
      table += fmt::format("{},{},{},{},{},{},", cell(c.station_id), st ? cell(st->name) : "",
                           st ? num(st->location.lat) : "", st ? num(st->location.lon) : "",
                           school != schools.end() ? std::to_string(school->second) : "NA", c.n_hours);
      if (!c.error.empty()) {
        table += fmt::format("NA,NA,NA,NA,NA,NA,NA,{}\n", cell(c.error));
        warnings_.push_back(fmt::format("change point for station {}: {}", c.station_id, c.error));
        continue;
      }
      const std::string verdict = c.changed_at ? "change" : "no-change";
      const std::string at = c.changed_at ? format_timestamp(*c.changed_at) : "NA";
      const std::string date = c.change_date() ? format_date(*c.change_date()) : "NA";
      if (c.single) {
        const auto& s = *c.single;
        table += fmt::format("{},{},{},{},{},{},{},ok\n", verdict, at, date, s.tau ? std::to_string(*s.tau) : "NA",
                             num(s.cost_unsplit), num(s.best_objective), num(s.penalty));
        for (const auto& p : s.curve)
          curves += fmt::format("{},{},{},{}\n", cell(c.station_id), p.tau,
                                format_timestamp(r_station_hour(c.station_id, p.tau)), num(p.objective));
      } else {
        table += fmt::format("{},{},{},NA,NA,NA,NA,ok\n", verdict, at, date);
        for (std::size_t k = 0; k < c.all_changes.size(); ++k)
          multiple += fmt::format("{},{},{},{}\n", cell(c.station_id), k + 1, format_timestamp(c.all_changes[k]),
                                  format_date(civil_date(c.all_changes[k])));
      }
    }
    write("table1_changepoints.csv", table);
    if (config_.changepoint_mode == ChangePointMode::Single)
      write("changepoint_curves.csv", curves);
    else
      write("changepoints_multiple.csv", multiple);
  }

  // Hour start of the k-th data-present hour of a station.
  LocalTime r_station_hour(const std::string& id, std::size_t k) {
    if (hour_index_.empty())
      for_each_station(r_.hourly, [&](std::span<const HourlyMetrics> s) { hour_index_[s.front().station_id] = s; });
    return hour_index_.at(id)[k].hour_start;
  }

  // ------------------------------------------------------------- linearity

  void linearity() {
    std::vector<std::future<std::vector<StationLinearity>>> jobs;
    for_each_station(r_.hourly, [&](std::span<const HourlyMetrics> station) {
      jobs.push_back(std::async(std::launch::async, [station, this] {
        std::vector<StationLinearity> out;
        for (TimeBand band : kAllBands) {
          StationLinearity row{station.front().station_id, band, std::nullopt, ""};
          try {
            auto y = band_levels(station, band, config_.bands);
            row.result = linearity_test(y, config_.max_lag, config_.linearity_mode);
          } catch (const std::exception& e) {
            row.error = e.what();
          }
          out.push_back(std::move(row));
        }
        return out;
      }));
    });
    for (auto& job : jobs)
      for (auto& row : job.get()) r_.linearity.push_back(std::move(row));

    std::string summary = "station_id,band,n,max_lag,bound,lags_inside,fraction_inside,mode,verdict,status\n";
    std::map<std::string, std::string> per_station;
    for (const auto& l : r_.linearity) {
      if (!l.result) {
        summary += fmt::format("{},{},NA,{},NA,NA,NA,{},NA,{}\n", cell(l.station_id), to_string(l.band),
                               config_.max_lag, to_string(config_.linearity_mode), cell(l.error));
        continue;
      }
      const auto& d = *l.result;
      summary += fmt::format("{},{},{},{},{},{},{},{},{},ok\n", cell(l.station_id), to_string(l.band), d.n,
                             d.phi.size() - 1, num(d.bound), d.lags_inside(), num(d.fraction_inside()),
                             to_string(d.mode), to_string(d.verdict));
      auto& text = per_station[l.station_id];
      if (text.empty()) text = "band,tau,phi,bound,inside_band\n";
      for (std::size_t tau = 0; tau < d.phi.size(); ++tau)
        text += fmt::format("{},{},{},{},{}\n", to_string(l.band), tau, num(d.phi[tau]), num(d.bound),
                            std::abs(d.phi[tau]) <= d.bound ? 1 : 0);
    }
    write("linearity_summary.csv", summary);
    for (const auto& id : station_ids_)
      if (auto it = per_station.find(id); it != per_station.end())
        write(fmt::format("linearity/station_{}.csv", file_token(id)), it->second);
  }

  // ------------------------------------------------------------ exceedance

  void exceedance() {
    r_.exceedance = exceedance_report(r_.hourly, station_ids_, config_.split, config_.threshold_db);
    for (const auto& w : r_.exceedance.warnings) warnings_.push_back(w);
    r_.period_means = period_summary(r_.hourly, config_.split);

    std::string table =
        "station_id,threshold_db,pre_count,pre_total_hours,pre_pct,during_count,during_total_hours,during_pct\n";
    for (const auto& row : r_.exceedance.rows)
      table += fmt::format("{},{},{},{},{},{},{},{}\n", cell(row.station_id), num(config_.threshold_db),
                           row.pre_count, row.pre_total, row.pre_pct ? fmt::format("{:.2f}", *row.pre_pct) : "NA",
                           row.during_count, row.during_total,
                           row.during_pct ? fmt::format("{:.2f}", *row.during_pct) : "NA");
    write("table4_exceedance.csv", table);

    std::string means = "station_id,pre_avg_db,during_avg_db,reduction_db\n";
    for (const auto& m : r_.period_means)
      means += fmt::format("{},{},{},{}\n", cell(m.station_id), num(m.pre_avg), num(m.during_avg),
                           num(m.reduction()));
    write("figure2_period_means.csv", means);
  }

  // --------------------------------------------------------------- spatial

  void spatial() {
    if (inputs_.stations.empty()) throw InputError("the spatial step needs a stations file (--stations)");
    if (inputs_.traffic.empty() && inputs_.schools.empty())
      throw InputError("the spatial step needs a traffic file (--traffic) or a schools file (--schools)");
    load_station_file();
    if (r_.stations.empty()) throw InputError(fmt::format("'{}' holds no valid stations", inputs_.stations));

    if (!inputs_.schools.empty()) {
      auto in = open_input(inputs_.schools, "schools");
      auto loaded = load_schools(in);
      for (auto& f : loaded.flags) warnings_.push_back(fmt::format("schools line {}: {}", f.line, f.detail));
      r_.schools = school_count(r_.stations, loaded.items, config_.radius_m);
      std::string out = "station_id,name,radius_m,schools_within_radius\n";
      for (const auto& s : r_.schools)
        out += fmt::format("{},{},{},{}\n", cell(s.station_id), cell(station(s.station_id)->name),
                           num(config_.radius_m), s.count);
      write("schools_within_radius.csv", out);
    }
    if (inputs_.traffic.empty()) return;

    auto in = open_input(inputs_.traffic, "traffic");
    auto loaded = load_traffic(in);
    for (auto& f : loaded.flags) warnings_.push_back(fmt::format("traffic line {}: {}", f.line, f.detail));
    r_.traffic = station_traffic(r_.stations, loaded.items, config_.radius_m);

    std::string table = "station_id,name,radius_m,n_points,night,day,evening\n";
    for (const auto& t : r_.traffic) {
      table += fmt::format("{},{},{},{},{},{},{}\n", cell(t.station_id), cell(station(t.station_id)->name),
                           num(config_.radius_m), t.n_points_in_radius, num(t.mean(TimeBand::Night)),
                           num(t.mean(TimeBand::Day)), num(t.mean(TimeBand::Evening)));
      if (!t.mean_count) warnings_.push_back(fmt::format("station {} has no traffic data within {} m", t.station_id,
                                                         num(config_.radius_m)));
    }
    write("table3_traffic.csv", table);

    if (r_.hourly.empty()) return;  // noise side not available in this run
    std::map<std::string, std::span<const HourlyMetrics>> by_station;
    for_each_station(r_.hourly, [&](std::span<const HourlyMetrics> s) { by_station[s.front().station_id] = s; });
    const std::set<std::string> centre(config_.city_center_stations.begin(), config_.city_center_stations.end());

    for (TimeBand band : kAllBands) {
      for (const auto& t : r_.traffic) {
        auto it = by_station.find(t.station_id);
        if (!t.mean_count || it == by_station.end()) continue;
        std::vector<double> levels;
        for (const auto& h : it->second)
          if (band_of(h.hour_start, config_.bands) == band && period_of(h.hour_start, config_.split) == Period::Pre)
            levels.push_back(h.avg.value());
        if (levels.empty()) continue;
        r_.noise_traffic.push_back({t.station_id, band, *t.mean(band), energy_average(levels),
                                    centre.contains(t.station_id) ? "city-center" : "other"});
      }
    }

    std::string points = "station_id,band,mean_traffic,mean_noise_db,group\n";
    for (const auto& p : r_.noise_traffic)
      points += fmt::format("{},{},{},{},{}\n", cell(p.station_id), to_string(p.band), num(p.mean_traffic),
                            num(p.mean_noise), p.group);
    write("figure8_noise_traffic.csv", points);

    std::vector<std::string> groups{"all"};
    if (!centre.empty()) groups.insert(groups.end(), {"city-center", "other"});
    std::string fits = "band,group,n,slope_db_per_vehicle,intercept_db,r_squared,status\n";
    for (TimeBand band : kAllBands) {
      for (const auto& g : groups) {
        std::vector<TrafficNoisePoint> pts;
        for (const auto& p : r_.noise_traffic)
          if (p.band == band && (g == "all" || p.group == g)) pts.push_back({p.mean_traffic, p.mean_noise});
        auto fit = noise_traffic_fit(pts);
        r_.fits.push_back({band, g, fit});
        if (fit)
          fits += fmt::format("{},{},{},{},{},{},ok\n", to_string(band), g, fit->n, num(fit->slope),
                              num(fit->intercept), num(fit->r_squared));
        else
          fits += fmt::format("{},{},{},NA,NA,NA,too few distinct points\n", to_string(band), g, pts.size());
      }
    }
    write("figure8_fits.csv", fits);
  }

  // -------------------------------------------------------------- manifest

  void write_manifest() {
    json m;
    m["tool"] = "noisescape";
    m["exit_code"] = r_.exit_code;
    m["failed_step"] = r_.failed_step.empty() ? json(nullptr) : json(r_.failed_step);
    if (!r_.error.empty()) m["error"] = r_.error;

    json cfg = json::object();
    std::istringstream text(to_text(config_));
    std::string line;
    while (std::getline(text, line)) {
      auto eq = line.find(" = ");
      if (eq != std::string::npos) cfg[line.substr(0, eq)] = line.substr(eq + 3);
    }
    m["config"] = cfg;
    m["config_text"] = to_text(config_);

    m["inputs"] = {{"samples", inputs_.samples},
                   {"stations", inputs_.stations},
                   {"traffic", inputs_.traffic},
                   {"schools", inputs_.schools}};
    json steps = json::array();
    for (const auto& st : status_) {
      json s = {{"name", to_string(st.step)}, {"status", st.status}};
      if (!st.message.empty()) s["message"] = st.message;
      steps.push_back(s);
    }
    m["steps"] = steps;
    m["counts"] = {{"rows_read", r_.ingest.rows_read},
                   {"rows_accepted", r_.ingest.rows_accepted},
                   {"rows_flagged", r_.ingest.rows_flagged()},
                   {"stations", station_ids_.size()},
                   {"hours", r_.hourly.size()}};
    m["warnings"] = warnings_;
    m["files"] = r_.files;

    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
  }

  const AnalysisConfig& config_;
  const InputPaths& inputs_;
  fs::path dir_;
  PipelineResult& r_;

  std::vector<StepStatus> status_;
  std::vector<NoiseSample> samples_;
  std::vector<std::string> station_ids_;
  std::vector<std::pair<std::string, RowFlag>> other_flags_;
  std::vector<std::string> warnings_;
  std::map<std::string, std::span<const HourlyMetrics>> hour_index_;
  bool stations_loaded_ = false;
};

}  // namespace

PipelineResult run_pipeline(const AnalysisConfig& config, const InputPaths& inputs, const fs::path& out_dir,
                            const std::vector<Step>& steps) {
  PipelineResult result;
  try {
    Run(config, inputs, out_dir, result).execute(steps);
  } catch (const std::exception& e) {
    // Only reachable when the output directory itself is unusable.
    result.exit_code = kExitInputError;
    result.failed_step = "output";
    result.error = e.what();
  }
  return result;
}

}  // namespace noisescape
