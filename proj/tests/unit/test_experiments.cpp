#include "gatehold/error.hpp"
#include "gatehold/experiments.hpp"
#include "gatehold/json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gatehold;

namespace {

AirportProfile tiny_profile() {
  auto p = lga_profile();
  p.generator.flight_count = 160;
  p.replications = 2;
  p.sweep_lo = 8;
  p.sweep_hi = 10;
  p.n_star_default = 8;
  p.tabu.budget = 40;
  p.tabu.stall_limit = 20;
  p.restarts = 2;
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepRow row(int n, double hold, double taxi) { return {n, hold, taxi, 0, 0}; }

}  // namespace

TEST_CASE("profiles validate and resolve by name") {
  CHECK_NOTHROW(lga_profile().validate());
  CHECK_NOTHROW(hub_profile().validate());
  CHECK(profile_by_name("lga").name == "lga");
  CHECK(profile_by_name("hub").name == "hub");
  CHECK_THROWS_AS(profile_by_name("jfk"), Error);
}

TEST_CASE("select_n_star picks the smallest qualifying threshold") {
  Sweep s;
  s.baseline = row(0, 0, 12.0);
  s.rows = {row(10, 3.0, 10.0), row(11, 0.5, 11.8), row(12, 0.2, 11.9), row(13, 0.0, 12.0)};
  CHECK(select_n_star(s, 1.0) == 10);
  CHECK(select_n_star(s, 0.9) == 11);
  CHECK(select_n_star(s, 0.15) == 12);

  Sweep flat;
  flat.baseline = row(0, 0, 9.0);
  flat.rows = {row(5, 0, 9.0), row(6, 0, 9.0), row(7, 0, 9.0)};
  CHECK(select_n_star(flat, 0.5) == 5);

  CHECK_THROWS_AS(select_n_star(s, 0.0), Error);
  CHECK_THROWS_AS(select_n_star(s, -1.0), Error);
  Sweep none;
  none.baseline = row(0, 0, 9.0);
  none.rows = {row(5, 8, 9.0)};
  CHECK_THROWS_AS(select_n_star(none, 1.0), Error);
}

TEST_CASE("tiny study fills the four cells") {
  StudyOptions opt;
  opt.calibrate = false;
  const auto res = run_study(tiny_profile(), 3, opt);
  const auto& r = res.report;
  CHECK(r.profile == "lga");
  CHECK(r.legs == res.legs.flights.size());
  CHECK(r.turns == res.turns.flights.size());
  CHECK(r.n_star == 8);
  CHECK(r.replications == 2);
  for (int a = 0; a < 2; ++a) {
    CHECK(r.cells[a][0].held == 0.0);
    CHECK(r.cells[a][0].mean_hold_all == 0.0);
    CHECK(r.cells[a][1].departures == r.cells[a][0].departures);
    CHECK(r.cells[a][1].mean_taxi <= r.cells[a][0].mean_taxi + 1e-9);
    CHECK(r.held_fraction(a) >= 0.0);
    CHECK(r.held_fraction(a) <= 1.0);
  }
  CHECK(r.robust.separation.mean >= r.baseline.separation.mean);
  CHECK(r.robust.objective <= r.baseline.objective);
  CHECK(r.sweep_baseline.rows.size() == 3);
  CHECK(r.sweep_robust.rows.size() == 3);
  CHECK(res.baseline.size() == res.turns.flights.size());
  CHECK(res.robust.size() == res.turns.flights.size());
  CHECK(r.A > 0);
  CHECK(r.B > 0);
  CHECK(r.B < 1);
}

TEST_CASE("study report is reproducible and carries a schema version") {
  StudyOptions opt;
  opt.calibrate = false;
  opt.sweep = false;
  const auto a = run_study(tiny_profile(), 21, opt);
  const auto b = run_study(tiny_profile(), 21, opt);
  CHECK(to_json(a.report).dump() == to_json(b.report).dump());

  const auto dir = std::filesystem::temp_directory_path() / "gatehold_test_study";
  std::filesystem::remove_all(dir);
  write_study(dir, a);
  for (const char* f : {"legs.csv", "turns.csv", "gates.csv", "assignment_current.csv",
                        "assignment_robust.csv", "overlap.csv", "tabu_trace.csv", "report.json",
                        "report.md"})
    CHECK_MESSAGE(std::filesystem::exists(dir / f), f);
  const auto j = read_json(dir / "report.json");
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(slurp(dir / "report.md").find("holding") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("invalid profile is rejected before any work") {
  auto p = tiny_profile();
  p.replications = 0;
  CHECK_THROWS_AS(run_study(p, 1), Error);
  p = tiny_profile();
  p.sweep_hi = p.sweep_lo - 1;
  CHECK_THROWS_AS(run_study(p, 1), Error);
}
