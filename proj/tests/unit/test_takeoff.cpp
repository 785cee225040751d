#include "gatehold/error.hpp"
#include "gatehold/takeoff.hpp"

#include <doctest.h>

#include <cmath>

using namespace gatehold;

TEST_CASE("closed-form mean and windowed deviation") {
  CHECK(takeoff_sigma(kLgaTakeoffParams) == doctest::Approx(0.1234).epsilon(0.0005 / 0.1234));
  // 0.525*0.3733 + 1.025*0.38 + 0.025*0.2467
  CHECK(takeoff_mean(kLgaTakeoffParams) == doctest::Approx(0.591650).epsilon(1e-6));
  const TakeoffParams flat{0.4, 0.4, 0.4, 0.2, 0.3};
  CHECK(takeoff_mean(flat) == doctest::Approx(0.4));
  CHECK(takeoff_sigma(flat) == doctest::Approx(0.0));
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(kLgaTakeoffParams.validate());
  CHECK_THROWS_AS((TakeoffParams{0.5, 1.0, 0.1, 0.7, 0.5}.validate()), Error);
  CHECK_THROWS_AS((TakeoffParams{-0.1, 1.0, 0.1, 0.3, 0.3}.validate()), Error);
  CHECK_THROWS_AS((TakeoffParams{0.5, 1.0, 0.1, -0.1, 0.3}.validate()), Error);
}

TEST_CASE("cumulative clearance worked example") {
  RunwayProcess rp(kLgaTakeoffParams, 1);
  rp.set_carry(0.55);
  CHECK(rp.step_with_rate(3, 0.525) == 1);
  CHECK(rp.carry() == doctest::Approx(0.075).epsilon(1e-12));
}

TEST_CASE("clearances never exceed the queue and an empty queue freezes the carry") {
  RunwayProcess rp(kLgaTakeoffParams, 2);
  rp.set_carry(0.9);
  CHECK(rp.step_with_rate(0, 1.025) == 0);
  CHECK(rp.carry() == doctest::Approx(0.9));
  CHECK(rp.step_with_rate(1, 1.025) == 1);
  CHECK(rp.carry() >= 0.0);
  rp.set_carry(0.0);
  for (int i = 0; i < 10000; ++i) {
    const int q = i % 3;
    const int c = rp.step(q);
    CHECK(c <= q);
    CHECK(c >= 0);
    CHECK(rp.carry() >= 0.0);
  }
}

TEST_CASE("degenerate rates emit a constant rate") {
  const TakeoffParams p{0.5, 0.5, 0.5, 0.1, 0.6};
  RunwayProcess rp(p, 9);
  for (int i = 0; i < 100; ++i) CHECK(rp.draw_rate() == 0.5);
  int cleared = 0;
  for (int i = 0; i < 100; ++i) cleared += rp.step(1000);
  CHECK(cleared == 50);
}

TEST_CASE("draw frequencies follow p") {
  RunwayProcess rp(kLgaTakeoffParams, 11);
  int n1 = 0, n2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double c = rp.draw_rate();
    if (c == kLgaTakeoffParams.c1) ++n1;
    if (c == kLgaTakeoffParams.c2) ++n2;
  }
  CHECK(static_cast<double>(n1) / n == doctest::Approx(0.3733).epsilon(0.02));
  CHECK(static_cast<double>(n2) / n == doctest::Approx(0.38).epsilon(0.02));
}
