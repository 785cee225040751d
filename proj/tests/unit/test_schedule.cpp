#include "gatehold/error.hpp"
#include "gatehold/generator.hpp"
#include "gatehold/schedule.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

using namespace gatehold;

namespace {

const char* kHeader =
    "flight_id,airline,terminal,equipment_class,sched_arr,sched_dep,act_arr,act_dep,current_gate\n";

std::vector<std::string> data_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(line);
  return rows;
}

}  // namespace

TEST_CASE("empty schedule file") {
  std::istringstream in(kHeader);
  const auto s = read_schedule(in);
  CHECK(s.flights.empty());
}

TEST_CASE("arrival after departure is rejected") {
  std::istringstream in(std::string(kHeader) + "F1,AA,A,small,600,580,,,G1\n");
  try {
    read_schedule(in);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("arrival after departure") != std::string::npos);
    CHECK(std::string(e.what()).find("F1") != std::string::npos);
  }
}

TEST_CASE("three rows keep their ids and round-trip") {
  const std::string text = std::string(kHeader) +
                           "F1,AA,A,small,600,650,605,655,A1\n"
                           "F2,UA,B,large,,700,,712,B2\n"
                           "F3,AA,A,small,720,,718,,A1\n";
  std::istringstream in(text);
  const auto s = read_schedule(in);
  REQUIRE(s.flights.size() == 3);
  CHECK(s.flights[0].id == "F1");
  CHECK(s.flights[1].id == "F2");
  CHECK(s.flights[2].id == "F3");
  CHECK_FALSE(s.flights[1].sched_arr.has_value());
  CHECK(s.flights[1].equipment == EquipmentClass::large);

  std::ostringstream out;
  write_schedule(out, s);
  CHECK(data_rows(out.str()) == data_rows(text));
}

TEST_CASE("schedule errors name the row") {
  std::istringstream dup(std::string(kHeader) + "F1,AA,A,small,600,650,,,\nF1,AA,A,small,700,750,,,\n");
  CHECK_THROWS_WITH_AS(read_schedule(dup), doctest::Contains("duplicate flight id F1"), Error);

  std::istringstream bad(std::string(kHeader) + "F1,AA,A,small,600,650,,,\nF2,AA,A,small,abc,650,,,\n");
  CHECK_THROWS_WITH_AS(read_schedule(bad), doctest::Contains("row 2"), Error);

  std::istringstream eq(std::string(kHeader) + "F1,AA,A,medium,600,650,,,\n");
  CHECK_THROWS_AS(read_schedule(eq), Error);
}

TEST_CASE("timestamps parse as integers or ISO-8601") {
  CHECK(parse_time("605") == 605);
  CHECK(parse_time("-5") == -5);
  CHECK(parse_time("1970-01-01T01:30") == 90);
  CHECK(parse_time("1970-01-02") == 1440);
  CHECK(parse_time("2000-03-01T00:00:00") - parse_time("2000-02-28T00:00") == 2 * 1440);
  CHECK_THROWS_AS(parse_time("12:30"), Error);
}

TEST_CASE("gates round-trip") {
  const std::string text =
      "gate_id,terminal,airlines,equipment\nA1,A,AA;UA,small;large\nA2,A,AA,small\n";
  std::istringstream in(text);
  const auto gates = read_gates(in);
  REQUIRE(gates.size() == 2);
  CHECK(gates[0].airlines == std::set<std::string>{"AA", "UA"});
  CHECK(gates[1].equipment == std::set<EquipmentClass>{EquipmentClass::small});
  std::ostringstream out;
  write_gates(out, gates);
  CHECK(out.str() == text);

  std::istringstream empty_set("gate_id,terminal,airlines,equipment\nA1,A,,small\n");
  CHECK_THROWS_AS(read_gates(empty_set), Error);
}

TEST_CASE("pairing a simple turn") {
  const auto out = pair_flights({testing::arrival("a1", 600, "G1")}, {testing::departure("d1", 660, "G1")});
  REQUIRE(out.size() == 1);
  CHECK(out[0].is_turn());
  CHECK(out[0].id == "a1+d1");
  CHECK(out[0].legs == std::vector<std::string>{"a1", "d1"});
  CHECK(*out[0].sched_arr == 600);
  CHECK(*out[0].sched_dep == 660);
}

TEST_CASE("pairing empty input") { CHECK(pair_flights({}, {}).empty()); }

TEST_CASE("towed aircraft stay unpaired") {
  const auto out = pair_flights({testing::arrival("a1", 600, "G1"), testing::arrival("a2", 640, "G1")},
                                {testing::departure("d2", 700, "G1"), testing::departure("d1", 760, "G1")});
  REQUIRE(out.size() == 3);
  std::map<std::string, const Flight*> by_id;
  for (const auto& f : out) by_id[f.id] = &f;
  REQUIRE(by_id.contains("a2+d2"));
  REQUIRE(by_id.contains("a1"));
  REQUIRE(by_id.contains("d1"));
  CHECK_FALSE(by_id["a1"]->has_departure());
  CHECK_FALSE(by_id["d1"]->has_arrival());
}

TEST_CASE("pairing respects equipment class and gate") {
  auto out = pair_flights({testing::arrival("a1", 600, "G1", EquipmentClass::small)},
                          {testing::departure("d1", 660, "G1", EquipmentClass::large)});
  CHECK(out.size() == 2);
  out = pair_flights({testing::arrival("a1", 600, "G1")}, {testing::departure("d1", 660, "G2")});
  CHECK(out.size() == 2);
}

TEST_CASE("pairing conserves every leg") {
  GeneratorConfig cfg;
  cfg.terminals = {{"A", 6, 2, {"AA", "UA"}}, {"B", 4, 0, {"DL"}}};
  cfg.tow_fraction = 0.2;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto legs = gen_synthetic(cfg, seed);
    const auto turns = pair_schedule(legs);
    std::multiset<std::string> seen;
    for (const auto& f : turns.flights)
      for (const auto& id : f.source_ids()) seen.insert(id);
    std::multiset<std::string> expected;
    for (const auto& f : legs.flights) expected.insert(f.id);
    CHECK(seen == expected);
  }
}

TEST_CASE("windows and validation") {
  auto f = testing::arrival("a", 600, "G1");
  auto w = scheduled_window(f, 45);
  CHECK(w.t_in == 600);
  CHECK(w.t_out == 645);
  auto d = testing::departure("d", 700, "G1");
  w = actual_window(d, 45);
  CHECK(w.t_in == 655);
  CHECK(w.t_out == 700);
  Flight none;
  none.id = "x";
  CHECK_THROWS_AS(validate_flight(none), Error);
}
