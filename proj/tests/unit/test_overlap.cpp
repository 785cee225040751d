#include "gatehold/error.hpp"
#include "gatehold/experiments.hpp"
#include "gatehold/overlap.hpp"
#include "gatehold/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace gatehold;

namespace {

std::vector<std::pair<double, double>> exact_table(double A, double B, int n) {
  std::vector<std::pair<double, double>> t;
  for (int x = 0; x <= n; ++x) t.emplace_back(x, A * std::pow(B, x));
  return t;
}

EmpiricalDistribution random_distribution(Rng& rng, int lo, int width) {
  std::vector<double> w(static_cast<std::size_t>(width));
  for (auto& v : w) v = rng.uniform();
  return EmpiricalDistribution::from_weights(lo, w);
}

// Brute force over both distributions.
double brute_overlap(const DelayDistributions& d, int sep) {
  double e = 0;
  for (std::size_t i = 0; i < d.departure.mass.size(); ++i)
    for (std::size_t k = 0; k < d.arrival.mass.size(); ++k) {
      const double x = (d.departure.lo + static_cast<int>(i)) - (d.arrival.lo + static_cast<int>(k)) - sep;
      if (x > 0) e += d.departure.mass[i] * d.arrival.mass[k] * x;
    }
  return e;
}

}  // namespace

TEST_CASE("exponential fit recovers exact parameters") {
  const auto fit = fit_exponential(exact_table(8.0, 0.97, 240));
  CHECK(std::abs(fit.A - 8.0) < 1e-9);
  CHECK(std::abs(fit.B - 0.97) < 1e-9);
  CHECK(fit.points == 241);
}

TEST_CASE("exponential fit is scale consistent") {
  auto t = exact_table(8.0, 0.97, 100);
  Rng rng(4);
  for (auto& [x, y] : t) y *= std::exp(0.1 * (rng.uniform() - 0.5));
  const auto base = fit_exponential(t);
  for (auto& [x, y] : t) y *= 3.0;
  const auto scaled = fit_exponential(t);
  CHECK(scaled.A == doctest::Approx(3.0 * base.A).epsilon(1e-12));
  CHECK(scaled.B == doctest::Approx(base.B).epsilon(1e-12));
}

TEST_CASE("exponential fit skips zero overlaps and rejects degenerate tables") {
  auto t = exact_table(8.0, 0.97, 20);
  t.emplace_back(21, 0.0);
  t.emplace_back(22, -1.0);
  const auto fit = fit_exponential(t);
  CHECK(fit.points == 21);
  CHECK(std::abs(fit.B - 0.97) < 1e-9);
  const std::vector<std::pair<double, double>> two{{0, 8.0}, {1, 7.0}, {2, 0.0}};
  CHECK_THROWS_WITH_AS(fit_exponential(two), doctest::Contains("degenerate"), Error);
}

TEST_CASE("point masses give a hand-computable overlap") {
  DelayDistributions d{EmpiricalDistribution::point_mass(20), EmpiricalDistribution::point_mass(0)};
  CHECK(expected_overlap(d, 0) == doctest::Approx(20.0));
  CHECK(expected_overlap(d, 5) == doctest::Approx(15.0));
  CHECK(expected_overlap(d, 25) == doctest::Approx(0.0));
  const auto v = overlap_at(delay_difference(d), 5);
  CHECK(v.probability == doctest::Approx(1.0));
  CHECK(v.conditional == doctest::Approx(15.0));
  CHECK_THROWS_AS(expected_overlap(d, -1), Error);
}

TEST_CASE("convolution matches brute force") {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    DelayDistributions d{random_distribution(rng, -20, 60), random_distribution(rng, -30, 40)};
    for (int sep : {0, 3, 17, 45, 90}) {
      CHECK(expected_overlap(d, sep) == doctest::Approx(brute_overlap(d, sep)).epsilon(1e-9));
      const auto v = overlap_at(delay_difference(d), sep);
      CHECK(v.unconditional == doctest::Approx(v.probability * v.conditional).epsilon(1e-9));
    }
  }
}

TEST_CASE("overlap decreases to zero with separation") {
  Rng rng(2);
  DelayDistributions d{random_distribution(rng, -10, 80), random_distribution(rng, -25, 50)};
  const auto table = overlap_table(d, 240);
  REQUIRE(table.size() == 241);
  for (std::size_t i = 1; i < table.size(); ++i) {
    CHECK(table[i].value.unconditional >= 0.0);
    CHECK(table[i].value.unconditional <= table[i - 1].value.unconditional + 1e-12);
  }
  CHECK(table.back().value.unconditional == 0.0);

  const auto serial = overlap_table_serial(d, 240);
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(serial[i].value.unconditional == table[i].value.unconditional);
    CHECK(serial[i].value.probability == table[i].value.probability);
  }
}

TEST_CASE("histogram binning clamps to the range") {
  const std::vector<double> s{-100.0, 0.0, 0.0, 500.0};
  const auto d = EmpiricalDistribution::from_samples(s, -60, 240);
  CHECK(d.lo == -60);
  CHECK(d.hi() == 240);
  CHECK(d.mass.front() == doctest::Approx(0.25));
  CHECK(d.mass[60] == doctest::Approx(0.5));
  CHECK(d.mass.back() == doctest::Approx(0.25));
  CHECK_THROWS_AS(EmpiricalDistribution::from_samples({}), Error);
}

TEST_CASE("LGA-like delays give about eight minutes of overlap at zero separation") {
  const auto legs = gen_synthetic(lga_profile().generator, 1);
  const auto d = delays_from_schedule(legs);
  const double e0 = expected_overlap(d, 0);
  CHECK(e0 >= 5.0);
  CHECK(e0 <= 11.0);
  const auto model = fit_disturbance(d);
  CHECK(model.A > 0.0);
  CHECK(model.B > 0.0);
  CHECK(model.B < 1.0);
  CHECK(model(0) == doctest::Approx(model.A));
}
