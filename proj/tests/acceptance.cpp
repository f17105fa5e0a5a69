// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "noisescape/aggregate.hpp"
#include "noisescape/changepoint.hpp"
#include "noisescape/config.hpp"
#include "noisescape/diagnostics.hpp"
#include "noisescape/exceedance.hpp"
#include "noisescape/ingest.hpp"
#include "noisescape/report.hpp"
#include "noisescape/spatial.hpp"
#include "noisescape/student_t.hpp"
#include "noisescape/synthgen.hpp"
#include "noisescape/trend.hpp"
#include "oracles.hpp"

using namespace noisescape;
namespace fs = std::filesystem;

namespace {

// Collects failed checks for one criterion.
struct Checks {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& text) { notes.push_back(text); }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<void(Checks&)> body;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string data_file(const char* name) { return std::string(NOISESCAPE_DATA_DIR) + "/" + name; }

// ------------------------------------------------------------- criterion 1

void energy_average_checks(Checks& c) {
  const double v = energy_average(std::vector<double>{50.0, 60.0});
  const double ref = static_cast<double>(oracle::energy_average({50.0, 60.0}));
  c.expect(std::fabs(v - 57.4036) <= 1e-3 && std::fabs(v - ref) <= 1e-12,
           fmt::format("energy_average(50, 60) = {:.10f}, oracle {:.10f}", v, ref));
  c.note(fmt::format("[50,60] -> {:.6f}", v));

  oracle::Normal rng(101);
  int jensen_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 60);
    std::vector<double> x(n);
    for (auto& e : x) e = 30.0 + 70.0 * rng.uniform();
    double arith = 0.0;
    for (double e : x) arith += e;
    arith /= static_cast<double>(n);
    const double avg = energy_average(x);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (avg < arith - 1e-9 || avg < *lo || avg > *hi) ++jensen_bad;
  }
  c.expect(jensen_bad == 0, fmt::format("{} of 10000 vectors break mean <= energy mean <= max", jensen_bad));

  int fixed_bad = 0;
  for (double level : {0.0, 17.3, 55.0, 57.3, 99.9, 140.0})
    for (std::size_t n : {1u, 2u, 7u, 12u, 1000u})
      if (energy_average(std::vector<double>(n, level)) != level) ++fixed_bad;
  c.expect(fixed_bad == 0, fmt::format("{} constant inputs not returned exactly", fixed_bad));
}

// ------------------------------------------------------------- criterion 2

void ols_checks(Checks& c) {
  std::vector<double> t(50), y(50);
  for (int i = 0; i < 50; ++i) {
    t[i] = i + 1;
    y[i] = 3.0 + 2.0 * t[i];
  }
  auto line = ols_fit(y, t);
  c.expect(std::fabs(line.slope - 2.0) <= 1e-9 && std::fabs(line.intercept - 3.0) <= 1e-9 && line.exact_fit,
           fmt::format("noiseless line gave slope {} intercept {} exact_fit {}", line.slope, line.intercept,
                       line.exact_fit));

  oracle::Normal z(7);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 10 + rep * 7;
    std::vector<double> tt(n), yy(n);
    for (std::size_t i = 0; i < n; ++i) {
      tt[i] = static_cast<double>(i);
      yy[i] = 60.0 - 0.05 * tt[i] + 1.5 * z();
    }
    auto fit = ols_fit(yy, tt);
    long double s0 = 0, s1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      long double e = yy[i] - (static_cast<long double>(fit.intercept) + static_cast<long double>(fit.slope) * tt[i]);
      s0 += e;
      s1 += e * tt[i];
    }
    worst = std::max({worst, static_cast<double>(std::fabs(s0)), static_cast<double>(std::fabs(s1))});
  }
  c.expect(worst <= 1e-8, fmt::format("residual orthogonality off by {}", worst));
  c.note(fmt::format("max |sum e|, |sum e t| = {:.1e}", worst));

  struct Row {
    double p, dof, t;
  };
  const Row table[] = {{.975, 1, 12.706}, {.975, 2, 4.303},  {.975, 5, 2.571},   {.975, 10, 2.228},
                       {.975, 20, 2.086}, {.975, 30, 2.042}, {.95, 5, 2.015},    {.95, 10, 1.812},
                       {.995, 1, 63.657}, {.995, 10, 3.169}, {.995, 30, 2.750},  {.9, 15, 1.341}};
  int bad = 0;
  for (const auto& r : table)
    if (std::fabs(student_t_quantile(r.p, r.dof) - r.t) > 1e-3) ++bad;
  c.expect(bad == 0, fmt::format("{} of {} tabulated t quantiles off by more than 1e-3", bad, std::size(table)));
  const double p10 = student_t_two_sided_p(2.228, 10);
  c.expect(std::fabs(p10 - 0.05) <= 1e-3, fmt::format("two-sided p at t = 2.228, 10 dof is {}", p10));
}

// ------------------------------------------------------------- criterion 3

std::vector<double> random_series(oracle::Normal& rng, std::size_t n, int kind) {
  std::vector<double> y(n);
  const auto tau = static_cast<std::size_t>(n * (0.2 + 0.6 * rng.uniform()));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng();
    switch (kind) {
      case 0: y[i] = 60.0 + z; break;                                   // no change
      case 1: y[i] = 60.0 + (i >= tau ? -3.0 : 0.0) + z; break;         // mean shift
      case 2: y[i] = 60.0 + (i >= tau ? 3.0 : 1.0) * z; break;          // variance shift
      case 3: y[i] = std::round(60.0 + (i >= tau ? 1.0 : 0.0) + z); break;  // integer levels
      default: y[i] = 0.0; break;
    }
  }
  if (kind == 4) {  // palindrome: every objective value comes in tied pairs
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) y[i] = y[n - 1 - i] = std::round(2.0 * rng());
  }
  return y;
}

void changepoint_checks(Checks& c) {
  oracle::Normal rng(2020);
  int single_bad = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 491);
    auto y = random_series(rng, n, k % 5);
    auto r = detect_single(y);
    auto o = oracle::single_split(y);
    const bool change = r.verdict == Verdict::Change;
    if (r.best_tau != o.tau || change != o.change || (change && r.tau != o.tau)) {
      ++single_bad;
      c.note(fmt::format("series {} (n = {}): tau {} vs {}, change {} vs {}", k, n, r.best_tau, o.tau, change,
                         o.change));
    }
  }
  c.expect(single_bad == 0, fmt::format("{} of 200 series differ from the exhaustive scan", single_bad));

  int pelt_bad = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 291);
    std::vector<double> y(n);
    const std::size_t block = 15 + static_cast<std::size_t>(rng.uniform() * 60);
    for (std::size_t i = 0; i < n; ++i) y[i] = ((i / block) % 3) * 2.5 + (1.0 + (i / block) % 2) * rng();
    const double got = detect_multiple(y).objective;
    const double want = static_cast<double>(oracle::optimal_partition(y));
    if (std::fabs(got - want) > 1e-9 * std::max(1.0, std::fabs(want))) ++pelt_bad;
  }
  c.expect(pelt_bad == 0, fmt::format("{} of 50 PELT objectives differ from unpruned DP", pelt_bad));

  oracle::Normal z(42);
  std::vector<double> step(200);
  for (std::size_t i = 0; i < 200; ++i) step[i] = 60.0 + (i >= 100 ? 5.0 : 0.0) + z();
  auto s = detect_single(step);
  c.expect(s.tau && *s.tau == 100, fmt::format("5 dB step at 100 found at {}", s.tau ? std::to_string(*s.tau) : "none"));

  int alarms = 0;
  oracle::Normal w(777);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> y(200);
    for (auto& v : y) v = 60.0 + w();
    alarms += detect_single(y).verdict == Verdict::Change;
  }
  c.expect(alarms <= 10, fmt::format("false alarms {} / 100", alarms));
  c.note(fmt::format("false alarms {}/100", alarms));
}

// ------------------------------------------------------------- criterion 4

void linearity_checks(Checks& c) {
  oracle::Normal z(2000);
  std::vector<double> white(2000), squared(2000);
  for (std::size_t i = 0; i < 2000; ++i) {
    white[i] = z();
    const double g = z();
    squared[i] = g * g - 1.0;
  }
  auto lin = linearity_test(white, 50, LinearityMode::Fraction95);
  c.expect(lin.verdict == Linearity::Linear, "white noise judged Nonlinear in fraction95 mode");
  c.expect(lin.fraction_inside() >= 0.93, fmt::format("white noise: {:.3f} of lags inside", lin.fraction_inside()));
  c.note(fmt::format("white noise {}/{} lags inside", lin.lags_inside(), lin.phi.size()));

  // Independent draws tie y' to (y')^2 only at lag 0, so the default
  // all-lags rule is the one that can see it; the 95% rule tolerates one lag.
  auto non = linearity_test(squared, 50);
  c.expect(non.verdict == Linearity::Nonlinear, "z^2 - 1 judged Linear");
  c.note(fmt::format("z^2 - 1 phi(0) = {:.3f}, {}/{} lags inside", non.phi[0], non.lags_inside(), non.phi.size()));

  double worst = 0.0;
  oracle::Normal r(4);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 52 + static_cast<std::size_t>(r.uniform() * 500);
    std::vector<double> y(n);
    for (auto& v : y) {
      const double g = r();
      v = k % 3 == 0 ? g : k % 3 == 1 ? std::exp(g) : (r.uniform() < 0.05 ? 40.0 : 0.0) + g;
    }
    for (double p : linearity_test(y, 50).phi) worst = std::max(worst, std::fabs(p));
  }
  c.expect(worst <= 1.0 + 1e-9, fmt::format("max |phi| = {}", worst));
  c.note(fmt::format("max |phi| {:.3f}", worst));
}

// ------------------------------------------------------------- criterion 5

void table4_checks(Checks& c) {
  const auto first = percent_2dp(1393, 2015);
  const auto second = percent_2dp(963, 1152);
  c.expect(first && std::fabs(*first - 69.13) <= 0.01, fmt::format("1393/2015 -> {}", first.value_or(-1)));
  c.expect(second && std::fabs(*second - 83.52) <= 0.10, fmt::format("963/1152 -> {}", second.value_or(-1)));
  c.note(fmt::format("{:.2f}% and {:.2f}% (printed 83.52%)", *first, *second));

  ScenarioSpec spec;
  StationScenario s;
  s.id = "1";
  spec.stations.push_back(s);
  std::istringstream in(generate(spec).samples_csv);
  auto batch = parse_samples(in);
  const std::vector<std::string> ids{"1"};
  auto gaps = audit_gaps(batch.samples, spec.window, ids);
  c.expect(gaps.size() == 1 && gaps[0].missing.empty(), "gapless fixture reports missing slots");
  if (!gaps.empty()) {
    const auto pre = gaps[0].expected_hours(Period::Pre), during = gaps[0].expected_hours(Period::During);
    c.expect(pre == 2016 && during == 1152, fmt::format("expected hours {} / {}", pre, during));
    c.expect(gaps[0].present_slots_pre == 2016 * 12 && gaps[0].present_slots_during == 1152 * 12,
             "present slots do not fill the window");
  }
}

// ------------------------------------------------------------- criterion 6

void golden_checks(Checks& c) {
  const fs::path root = fs::temp_directory_path() / fmt::format("noisescape_golden_{}", ::getpid());
  fs::remove_all(root);
  fs::create_directories(root);

  auto spec = golden_scenario();
  auto synth = generate(spec);
  spit(root / "samples.csv", synth.samples_csv);
  const InputPaths inputs{(root / "samples.csv").string(), data_file("stations.csv"), data_file("traffic.csv"),
                          data_file("schools.csv")};
  const auto config = load_config(data_file("analysis.ini"));
  auto a = run_pipeline(config, inputs, root / "a", steps_for("report"));
  auto b = run_pipeline(config, inputs, root / "b", steps_for("report"));
  c.expect(a.exit_code == kExitOk, fmt::format("pipeline failed at {}: {}", a.failed_step, a.error));
  if (a.exit_code != kExitOk) {
    fs::remove_all(root);
    return;
  }

  int dates_ok = 0;
  for (const auto& truth : synth.truth) {
    auto it = std::find_if(a.changepoints.begin(), a.changepoints.end(),
                           [&](const StationChangePoint& cp) { return cp.station_id == truth.station_id; });
    const bool ok = it != a.changepoints.end() && it->change_date() && truth.step_at &&
                    *it->change_date() == civil_date(*truth.step_at);
    dates_ok += ok;
    if (!ok) c.note(fmt::format("station {}: step date wrong", truth.station_id));
  }
  c.expect(dates_ok == 12, fmt::format("{} of 12 step dates exact", dates_ok));

  int slopes = 0, slopes_ok = 0;
  double worst_rel = 0.0;
  for (const auto& cell : a.trends) {
    auto truth = std::find_if(synth.truth.begin(), synth.truth.end(),
                              [&](const StationTruth& t) { return t.station_id == cell.station_id; });
    if (truth == synth.truth.end()) continue;
    const auto& want = truth->band_slope[static_cast<std::size_t>(cell.band)][static_cast<std::size_t>(cell.metric)];
    if (!want) continue;
    ++slopes;
    if (!cell.result) continue;
    const double rel = std::fabs(cell.result->slope - *want) / std::fabs(*want);
    worst_rel = std::max(worst_rel, rel);
    slopes_ok += rel <= 0.20 && cell.result->significant && *want < 0.0;
  }
  c.expect(slopes > 0 && slopes_ok == slopes,
           fmt::format("{} of {} slopes within 20% of truth and significant", slopes_ok, slopes));
  c.note(fmt::format("{} slopes, worst relative error {:.1f}%", slopes, 100.0 * worst_rel));

  int pct = 0, pct_ok = 0;
  double worst_pct = 0.0;
  for (const auto& row : a.exceedance.rows) {
    auto truth = std::find_if(synth.truth.begin(), synth.truth.end(),
                              [&](const StationTruth& t) { return t.station_id == row.station_id; });
    if (truth == synth.truth.end()) continue;
    const std::optional<double> got[2] = {row.pre_pct, row.during_pct};
    for (int p = 0; p < 2; ++p) {
      ++pct;
      if (!got[p] || !truth->exceedance_pct[p]) continue;
      const double d = std::fabs(*got[p] - *truth->exceedance_pct[p]);
      worst_pct = std::max(worst_pct, d);
      pct_ok += d <= 0.5;
    }
  }
  c.expect(pct == 24 && pct_ok == pct, fmt::format("{} of {} exceedance percentages within 0.5 points", pct_ok, pct));
  c.note(fmt::format("exceedance worst {:.3f} points", worst_pct));

  std::size_t files = 0, differing = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = fs::relative(e.path(), root / "a");
    if (!fs::exists(root / "b" / rel) || slurp(e.path()) != slurp(root / "b" / rel)) ++differing;
  }
  c.expect(b.exit_code == kExitOk && differing == 0 && files > 0,
           fmt::format("{} of {} bundle files differ between runs", differing, files));
  c.note(fmt::format("{} bundle files identical", files - differing));
  fs::remove_all(root);
}

// ------------------------------------------------------------- criterion 7

void spatial_checks(Checks& c) {
  oracle::Normal rng(500);
  int count_bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const GeoPoint center{53.2 + 0.3 * rng.uniform(), -6.5 + 0.4 * rng.uniform()};
    const double radius = 50.0 + 1500.0 * rng.uniform();
    const std::size_t n = static_cast<std::size_t>(rng.uniform() * 80);
    std::vector<GeoPoint> pts(n);
    std::size_t brute = 0;
    for (auto& p : pts) {
      p = {center.lat + 0.03 * (rng.uniform() - 0.5), center.lon + 0.05 * (rng.uniform() - 0.5)};
      brute += oracle::great_circle_m(center.lat, center.lon, p.lat, p.lon) <= radius;
    }
    if (points_within(center, pts, radius).size() != brute) ++count_bad;
  }
  c.expect(count_bad == 0, fmt::format("{} of 1000 configurations disagree with brute force", count_bad));

  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 30);
    std::vector<TrafficNoisePoint> pts(n);
    for (auto& p : pts) {
      p.traffic = 2000.0 * rng.uniform();
      p.noise_db = 50.0 + 0.004 * p.traffic + 3.0 * rng();
    }
    auto fit = noise_traffic_fit(pts);
    if (!fit) continue;
    long double mx = 0, my = 0;
    for (const auto& p : pts) {
      mx += p.traffic;
      my += p.noise_db;
    }
    mx /= n;
    my /= n;
    long double sxy = 0, sxx = 0, syy = 0;
    for (const auto& p : pts) {
      sxy += (p.traffic - mx) * (p.noise_db - my);
      sxx += (p.traffic - mx) * (p.traffic - mx);
      syy += (p.noise_db - my) * (p.noise_db - my);
    }
    const double r2 = static_cast<double>(sxy * sxy / (sxx * syy));
    worst = std::max(worst, std::fabs(fit->r_squared - r2));
  }
  c.expect(worst <= 1e-9, fmt::format("R^2 differs from squared correlation by {}", worst));

  std::ifstream in(data_file("stations.csv"));
  auto stations = load_stations(in);
  auto first = std::find_if(stations.items.begin(), stations.items.end(), [](const Station& s) { return s.id == "1"; });
  c.expect(stations.items.size() == 12 && stations.flags.empty(), "stations.csv did not load 12 clean rows");
  c.expect(first != stations.items.end() && first->location.lat == 53.343 && first->location.lon == -6.362,
           "station 1 is not at 53.343, -6.362");
  c.expect(std::all_of(stations.items.begin(), stations.items.end(),
                       [](const Station& s) { return s.location.lon < 0.0; }),
           "a station longitude is not west of Greenwich");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "energy average: reference value, Jensen bound, constant fixed point", 1.0, energy_average_checks},
      {2, "OLS: noiseless line, residual orthogonality, t quantiles", 1.0, ols_checks},
      {3, "change points: exhaustive-scan and DP equivalence, step localisation, false alarms", 30.0,
       changepoint_checks},
      {4, "linearity: white noise linear, squared noise nonlinear, |phi| <= 1", 5.0, linearity_checks},
      {5, "exceedance percentages and calendar hours", 1.0, table4_checks},
      {6, "golden run: step dates, slopes, exceedance, reproducible bundle", 60.0, golden_checks},
      {7, "spatial joins: brute-force counts, R^2, degrees-west stations", 5.0, spatial_checks},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.failures.push_back(fmt::format("exception: {}", e.what()));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.time_limit_s)
      checks.failures.push_back(fmt::format("took {:.2f} s, limit {:.0f} s", secs, cr.time_limit_s));

    const bool ok = checks.failures.empty();
    failed += !ok;
    std::string detail;
    for (const auto& f : checks.failures) detail += (detail.empty() ? "" : "; ") + f;
    for (const auto& n : checks.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::cout << fmt::format("{} [{}] {} ({:.2f} s){}{}\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                             detail.empty() ? "" : ": ", detail);
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
