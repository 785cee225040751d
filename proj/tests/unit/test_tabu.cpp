#include "gatehold/error.hpp"
#include "gatehold/tabu.hpp"
#include "helpers.hpp"
#include "random_instance.hpp"

#include <doctest.h>

using namespace gatehold;

namespace {

ProblemInstance instance(std::vector<std::pair<Minute, Minute>> windows, std::size_t gates) {
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < windows.size(); ++i)
    slots.push_back({"F" + std::to_string(i), windows[i].first, windows[i].second});
  std::vector<Gate> gs;
  for (std::size_t g = 0; g < gates; ++g) gs.push_back(testing::gate("G" + std::to_string(g)));
  std::vector<std::vector<char>> compat(windows.size(), std::vector<char>(gates, 1));
  return ProblemInstance(std::move(slots), std::move(gs), std::move(compat), 0, 8.0, 0.97);
}

}  // namespace

TEST_CASE("greedy start spreads flights over empty gates") {
  const auto inst = instance({{0, 10}, {20, 30}, {40, 50}}, 3);
  const auto g = greedy_initial(inst);
  REQUIRE(g.has_value());
  CHECK(objective(inst, *g) == 0.0);
}

TEST_CASE("optimum of zero found within one sweep") {
  const auto inst = instance({{0, 10}, {20, 30}, {40, 50}, {60, 70}}, 4);
  const Assignment start{0, 0, 0, 0};
  TabuOptions o;
  o.budget = inst.flights();
  const auto r = tabu_search(inst, start, o);
  CHECK(r.best_objective == 0.0);
  CHECK(r.iterations <= inst.flights());
}

TEST_CASE("budget zero returns the start") {
  const auto inst = instance({{0, 10}, {20, 30}}, 2);
  const Assignment start{0, 0};
  TabuOptions o;
  o.budget = 0;
  const auto r = tabu_search(inst, start, o);
  CHECK(r.best == start);
  CHECK(r.best_objective == r.initial_objective);
  CHECK(r.iterations == 0);
}

TEST_CASE("infeasible start is rejected") {
  const auto inst = instance({{0, 30}, {10, 40}}, 2);
  TabuOptions o;
  CHECK_THROWS_AS(tabu_search(inst, {0, 0}, o), Error);
  const auto single = instance({{0, 30}, {10, 40}}, 1);
  CHECK_THROWS_AS(initial_assignment(single), Error);
}

TEST_CASE("tabu matches brute force on six flights and three gates") {
  Rng rng(99);
  int compared = 0;
  while (compared < 30) {
    const auto inst = testing::random_instance(rng, 6, 3);
    Assignment opt;
    try {
      opt = brute_force(inst);
    } catch (const Error&) {
      continue;
    }
    const auto start = greedy_initial(inst);
    if (!start) continue;
    TabuOptions o;
    o.budget = 300;
    o.seed = 5;
    const auto r = tabu_search(inst, *start, o);
    CHECK(r.best_objective == doctest::Approx(objective(inst, opt)).epsilon(1e-12));
    ++compared;
  }
}

TEST_CASE("trace is non-increasing, best stays feasible, runs repeat") {
  Rng rng(7);
  const auto inst = testing::random_instance(rng, 30, 10);
  const auto start = initial_assignment(inst);
  TabuOptions o;
  o.budget = 200;
  o.seed = 3;
  const auto r = tabu_search(inst, start, o);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
  CHECK(check_feasible(inst, r.best).empty());
  CHECK(r.best_objective <= r.initial_objective);
  CHECK(objective(inst, r.best) == doctest::Approx(r.best_objective));

  const auto again = tabu_search(inst, start, o);
  CHECK(again.best == r.best);
  CHECK(again.trace == r.trace);
}

TEST_CASE("parallel restarts agree with the serial reference") {
  Rng rng(12);
  const auto inst = testing::random_instance(rng, 25, 8);
  const auto start = initial_assignment(inst);
  TabuOptions o;
  o.budget = 100;
  const std::vector<std::uint64_t> seeds{4, 9, 1, 6};
  const auto par = tabu_search_restarts(inst, start, o, seeds);
  const auto ser = tabu_search_restarts_serial(inst, start, o, seeds);
  CHECK(par.best == ser.best);
  CHECK(par.seed == ser.seed);
  CHECK(par.best_objective == ser.best_objective);
}
