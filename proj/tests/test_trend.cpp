#include <doctest.h>

#include <cmath>
#include <vector>

#include "noisescape/errors.hpp"
#include "noisescape/student_t.hpp"
#include "noisescape/trend.hpp"
#include "oracles.hpp"

using namespace noisescape;

TEST_CASE("regularized incomplete beta against scipy.special.betainc") {
  CHECK(regularized_incomplete_beta(2, 3, 0.4) == doctest::Approx(0.5248).epsilon(1e-13));
  CHECK(regularized_incomplete_beta(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-13));
  CHECK(regularized_incomplete_beta(10, 20, 0.25) == doctest::Approx(0.16630494959787945).epsilon(1e-12));
  CHECK(regularized_incomplete_beta(3, 4, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(3, 4, 1.0) == 1.0);
}

TEST_CASE("student t distribution against scipy.stats.t") {
  CHECK(student_t_cdf(1.5, 7) == doctest::Approx(0.911350756505015).epsilon(1e-12));
  CHECK(student_t_cdf(-2.0, 3) == doctest::Approx(0.06966298427942155).epsilon(1e-12));
  CHECK(student_t_cdf(0.0, 5) == doctest::Approx(0.5));
  CHECK(student_t_two_sided_p(2.228, 10) == doctest::Approx(0.0500118).epsilon(1e-5));

  struct Q {
    double dof, p, t;
  };
  // scipy.stats.t.ppf(p, dof)
  const Q table[] = {{1, 0.975, 12.7062047}, {2, 0.975, 4.30265273}, {3, 0.975, 3.18244631},
                     {5, 0.975, 2.57058184}, {10, 0.975, 2.22813885}, {15, 0.975, 2.13144955},
                     {20, 0.975, 2.08596345}, {30, 0.975, 2.04227246}, {60, 0.975, 2.00029782},
                     {120, 0.975, 1.97993041}, {10, 0.995, 3.16927267}, {5, 0.95, 2.01504837},
                     {25, 0.995, 2.78743581}};
  for (const auto& q : table) {
    CAPTURE(q.dof);
    CHECK(student_t_quantile(q.p, q.dof) == doctest::Approx(q.t).epsilon(1e-7));
    CHECK(student_t_quantile(1.0 - q.p, q.dof) == doctest::Approx(-q.t).epsilon(1e-7));
  }
}

TEST_CASE("OLS small worked example") {
  std::vector<double> y{1, 2, 2, 4}, t{1, 2, 3, 4};
  auto r = ols_fit(y, t);
  CHECK(r.slope == doctest::Approx(0.9));
  CHECK(r.intercept == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.slope_se == doctest::Approx(0.264575131106).epsilon(1e-10));
  CHECK(r.p_value == doctest::Approx(0.0766195).epsilon(1e-5));
  CHECK_FALSE(r.significant);
  CHECK(r.n == 4);
  CHECK(ols_fit(y, t, 0.10).significant);
}

TEST_CASE("OLS against the normal-equation oracle") {
  oracle::Normal z(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial;
    std::vector<double> y(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = 100.0 + i * 0.5 + z() * 0.1;
      y[i] = 60.0 - 0.03 * t[i] + z();
    }
    auto r = ols_fit(y, t);
    auto o = oracle::ols(y, t);
    CHECK(r.slope == doctest::Approx(static_cast<double>(o.slope)).epsilon(1e-8));
    CHECK(r.intercept == doctest::Approx(static_cast<double>(o.intercept)).epsilon(1e-8));
    // residuals orthogonal to 1 and t
    double s0 = 0, s1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - r.intercept - r.slope * t[i];
      s0 += e;
      s1 += e * t[i];
    }
    CHECK(std::fabs(s0) < 1e-8);
    CHECK(std::fabs(s1) < 1e-8 * (1 + t.back()));
  }
}

TEST_CASE("exact fits") {
  std::vector<double> t{0, 1, 2, 3, 4};
  std::vector<double> line{5, 3, 1, -1, -3};
  auto r = ols_fit(line, t);
  CHECK(r.exact_fit);
  CHECK(r.slope == doctest::Approx(-2.0));
  CHECK(r.p_value == 0.0);
  CHECK(r.significant);
  CHECK(std::isinf(r.t_stat));
  CHECK(r.t_stat < 0);
  CHECK(r.r_squared() == doctest::Approx(1.0));

  std::vector<double> flat(5, 52.0);
  auto f = ols_fit(flat, t);
  CHECK(f.exact_fit);
  CHECK(f.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.p_value == 1.0);
  CHECK_FALSE(f.significant);
}

TEST_CASE("OLS preconditions") {
  std::vector<double> two{1, 2};
  CHECK_THROWS_AS(ols_fit(two, two), InsufficientData);
  std::vector<double> y{1, 2, 3}, same{4, 4, 4};
  CHECK_THROWS_AS(ols_fit(y, same), DegenerateDesign);
  std::vector<double> shorter{1, 2, 3, 4};
  CHECK_THROWS_AS(ols_fit(y, shorter), std::invalid_argument);
}

TEST_CASE("band trends: one cell per series and metric") {
  std::vector<BandDailySeries> series;
  const auto origin = *parse_date("2020-01-01");
  for (const char* id : {"1", "2"}) {
    for (TimeBand band : kAllBands) {
      BandDailySeries s{id, band, {}};
      for (int d = 0; d < 30; ++d) {
        const double v = 60.0 - 0.05 * d + ((d * 7) % 5) * 0.1;
        s.entries.push_back({origin + std::chrono::days{d}, Decibel(v), Decibel(v + 10), Decibel(v - 5), 8});
      }
      series.push_back(s);
    }
  }
  series.push_back({"3", TimeBand::Day, {{origin, Decibel(50), Decibel(60), Decibel(40), 12}}});
  auto cells = band_trends(series, origin);
  REQUIRE(cells.size() == 7 * 3);
  CHECK(cells[0].station_id == "1");
  CHECK(cells[0].band == TimeBand::Night);
  CHECK(cells[0].metric == Metric::Avg);
  CHECK(cells[1].metric == Metric::Max);
  REQUIRE(cells[0].result);
  CHECK(cells[0].result->slope == doctest::Approx(-0.05).epsilon(0.05));
  CHECK(cells[0].result->significant);
  CHECK(cells[0].decreasing());
  CHECK_FALSE(cells.back().result);
  CHECK_FALSE(cells.back().unavailable_reason.empty());
}

TEST_CASE("hourly trends use hours since origin") {
  std::vector<HourlyMetrics> h;
  const auto start = *parse_timestamp("2020-01-01T00:00");
  for (int k = 0; k < 24 * 10; ++k) {
    const double v = 55.0 - 0.001 * k;
    h.push_back({"1", start + std::chrono::hours{k}, Decibel(v), Decibel(v + 8), Decibel(v - 4), 12});
  }
  auto cells = hourly_band_trends(h, start);
  REQUIRE(cells.size() == 9);
  for (const auto& c : cells) {
    REQUIRE(c.result);
    CHECK(c.result->slope == doctest::Approx(-0.001).epsilon(1e-9));
  }
}
