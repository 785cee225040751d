#include "gatehold/calibration.hpp"
#include "gatehold/error.hpp"
#include "gatehold/random.hpp"
#include "gatehold/takeoff.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace gatehold;

TEST_CASE("N/T series from no events") {
  const auto s = build_nt({});
  CHECK(s.n.empty());
  CHECK(s.rate.empty());
}

TEST_CASE("N/T series from one aircraft") {
  const std::vector<SurfaceEvent> ev{{"F1", 0, 5, "A"}};
  const auto s = build_nt(ev);
  CHECK(s.start == 0);
  REQUIRE(s.n.size() >= 6);
  for (int t = 0; t <= 4; ++t) CHECK(s.n[t] == 1);
  CHECK(s.n[5] == 0);
  CHECK(s.rate[0] == doctest::Approx(0.1));
}

TEST_CASE("ten take-offs in a window give rate one") {
  std::vector<SurfaceEvent> ev;
  for (int i = 0; i < 10; ++i) ev.push_back({"F" + std::to_string(i), 0, i, "A"});
  const auto s = build_nt(ev);
  CHECK(s.rate[0] == doctest::Approx(1.0));
}

TEST_CASE("unsorted events are rejected") {
  const std::vector<SurfaceEvent> ev{{"F1", 5, 9, "A"}, {"F2", 1, 8, "A"}};
  CHECK_THROWS_AS(build_nt(ev), Error);
}

TEST_CASE("correlation scan") {
  std::vector<int> n;
  Rng rng(3);
  for (int i = 0; i < 300; ++i) n.push_back(static_cast<int>(rng.uniform_int(0, 20)));
  std::vector<double> same(n.begin(), n.end());
  auto scan = correlation_scan(n, same, -5, 5);
  REQUIRE(scan.best_offset.has_value());
  CHECK(*scan.best_offset == 0);
  for (const auto& p : scan.points)
    if (p.offset == 0) CHECK(*p.r == doctest::Approx(1.0));

  // T(t) = N(t - 3): T(t + 3) = N(t).
  std::vector<double> shifted(n.size(), 0.0);
  for (std::size_t t = 3; t < n.size(); ++t) shifted[t] = n[t - 3];
  scan = correlation_scan(n, shifted, -5, 5);
  CHECK(*scan.best_offset == 3);

  const std::vector<double> flat(n.size(), 0.5);
  scan = correlation_scan(n, flat, -2, 2);
  CHECK_FALSE(scan.best_offset.has_value());
  for (const auto& p : scan.points) CHECK_FALSE(p.r.has_value());
}

namespace {

ThroughputCurve curve_of(int lo, int hi, double (*f)(int)) {
  ThroughputCurve c;
  for (int n = lo; n <= hi; ++n) c.entries.push_back({n, f(n), 0.05, 100});
  return c;
}

}  // namespace

TEST_CASE("saturation detection") {
  CHECK(detect_saturation(curve_of(3, 30, [](int) { return 0.5; })) == 3);
  CHECK(detect_saturation(curve_of(0, 30, [](int n) { return n < 15 ? 0.04 * n : 0.6; })) == 15);
  const int hub = detect_saturation(curve_of(0, 60, [](int n) { return n < 40 ? 0.03 * n : 1.2; }));
  CHECK(hub >= 38);
  CHECK(hub <= 42);
  CHECK_THROWS_WITH_AS(detect_saturation(curve_of(0, 30, [](int n) { return 0.05 * n; })),
                       doctest::Contains("no saturation in range"), Error);
}

TEST_CASE("throughput curve groups by N") {
  NTSeries s;
  s.n = {0, 1, 1, 2, 2, 2};
  s.rate = {0.0, 0.1, 0.3, 0.5, 0.5, 0.5};
  const auto c = build_throughput_curve(s);
  REQUIRE(c.entries.size() == 3);
  CHECK(c.entries[1].n == 1);
  CHECK(c.entries[1].mean_rate == doctest::Approx(0.2));
  CHECK(c.entries[1].std_rate == doctest::Approx(0.1));
  CHECK(c.entries[2].samples == 3);
  CHECK(c.entries[2].std_rate == doctest::Approx(0.0));
  const auto t = trim_curve(c, 2);
  REQUIRE(t.entries.size() == 2);
  CHECK(t.entries.front().n == 1);
}

TEST_CASE("probabilities solved from the published rates") {
  const auto p = solve_probabilities(0.525, 1.025, 0.025, takeoff_mean(kLgaTakeoffParams),
                                     takeoff_sigma(kLgaTakeoffParams));
  REQUIRE(p.has_value());
  CHECK(p->p1 == doctest::Approx(0.3733).epsilon(1e-3 / 0.3733));
  CHECK(p->p2 == doctest::Approx(0.38).epsilon(1e-3 / 0.38));
  CHECK_FALSE(solve_probabilities(0.5, 0.5, 0.5, 0.5, 0.0).has_value());
}

TEST_CASE("window-count distribution matches a saturated runway simulation") {
  const auto exact = window_count_distribution(kLgaTakeoffParams);
  CHECK(std::accumulate(exact.begin(), exact.end(), 0.0) == doctest::Approx(1.0));
  double mean = 0;
  for (std::size_t k = 0; k < exact.size(); ++k) mean += k * exact[k];
  CHECK(mean == doctest::Approx(10 * takeoff_mean(kLgaTakeoffParams)).epsilon(1e-9));

  RunwayProcess rp(kLgaTakeoffParams, 77);
  for (int i = 0; i < 1000; ++i) rp.step(1000);
  std::vector<double> hist(exact.size() + 5, 0.0);
  const int windows = 100000;
  for (int w = 0; w < windows; ++w) {
    int c = 0;
    for (int m = 0; m < 10; ++m) c += rp.step(1000);
    hist[static_cast<std::size_t>(c)] += 1.0 / windows;
  }
  std::vector<double> padded = exact;
  padded.resize(hist.size(), 0.0);
  CHECK(total_variation(padded, hist) < 0.01);
}

TEST_CASE("take-off grid search round trip") {
  const double mu = 0.5916, sigma = 0.1234;
  const auto empirical = window_count_distribution(kLgaTakeoffParams);
  TakeoffFitOptions o;
  o.c_max = 1.2;
  const auto fit = fit_takeoff_params(mu, sigma, empirical, o);
  CHECK(fit.feasible > 0);
  CHECK(takeoff_mean(fit.params) == doctest::Approx(mu).epsilon(1e-3 / mu));
  CHECK(takeoff_sigma(fit.params) == doctest::Approx(sigma).epsilon(1e-3 / sigma));
  CHECK(fit.distance < 0.05);

  const auto serial = fit_takeoff_params_serial(mu, sigma, empirical, o);
  CHECK(serial.params == fit.params);
  CHECK(serial.distance == fit.distance);
  CHECK(serial.feasible == fit.feasible);
}

TEST_CASE("take-off grid search with nothing feasible") {
  TakeoffFitOptions o;
  o.c_max = 0.1;
  const std::vector<double> empirical{1.0};
  CHECK_THROWS_AS(fit_takeoff_params(1.5, 0.1, empirical, o), Error);
}

TEST_CASE("lognormal taxi fit") {
  std::vector<double> e(40, std::exp(1.0));
  auto fit = fit_taxi_lognormal(e, "A");
  CHECK(fit.mu_log == doctest::Approx(1.0));
  CHECK(fit.sigma_log == kSigmaLogFloor);
  CHECK(fit.samples == 40);

  Rng rng(5);
  std::vector<double> x;
  for (int i = 0; i < 20000; ++i) x.push_back(rng.lognormal(2.8, 0.3));
  fit = fit_taxi_lognormal(x);
  CHECK(fit.mu_log == doctest::Approx(2.8).epsilon(0.005));
  CHECK(fit.sigma_log == doctest::Approx(0.3).epsilon(0.02));

  CHECK_THROWS_AS(fit_taxi_lognormal(std::vector<double>(10, 5.0)), Error);
  std::vector<double> bad(40, 5.0);
  bad[3] = 0.0;
  CHECK_THROWS_AS(fit_taxi_lognormal(bad), Error);
}

TEST_CASE("push-back congestion counts aircraft still taxiing") {
  const std::vector<SurfaceEvent> ev{{"a", 0, 10, "A"}, {"b", 2, 5, "A"}, {"c", 5, 9, "A"}, {"d", 12, 20, "A"}};
  const auto npb = pushback_congestion(ev);
  CHECK(npb == std::vector<int>{0, 1, 1, 0});
}
