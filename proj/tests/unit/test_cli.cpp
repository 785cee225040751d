#include "gatehold/cli.hpp"
#include "gatehold/json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using gatehold::dispatch;
using gatehold::Json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("gatehold_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string s(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"study", "--help"}).out.find("--n-star") != std::string::npos);
  CHECK(run({}).code != 0);
  CHECK(run({"frobnicate"}).code != 0);
  CHECK(run({"gen-synthetic"}).code != 0);  // --out is required
  CHECK(run({"gen-synthetic", "--out", "x", "--profile", "ord"}).code != 0);
  CHECK(run({"fit-overlap", "--in", "/nonexistent/legs.csv", "--out", "x"}).code != 0);
}

TEST_CASE("runtime errors exit 1 with a message") {
  const auto d = fresh_dir("bad");
  write(d / "bad.json", "[1, 2]");
  const auto r = run({"gen-synthetic", "--config", s(d / "bad.json"), "--out", s(d / "o")});
  CHECK(r.code == 1);
  CHECK(r.err.find("gatehold: error:") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("pipeline round trip") {
  const auto d = fresh_dir("pipeline");
  REQUIRE(run({"gen-synthetic", "--seed", "5", "--out", s(d / "gen")}).code == 0);
  const auto legs = s(d / "gen" / "legs.csv");
  CHECK(fs::exists(d / "gen" / "gates.csv"));
  CHECK(gatehold::read_json(d / "gen" / "summary.json").at("schema_version") == gatehold::kSchemaVersion);

  REQUIRE(run({"fit-overlap", "--in", legs, "--out", s(d / "fit")}).code == 0);
  const auto fit = gatehold::read_json(d / "fit" / "overlap.json");
  CHECK(fit.at("A").get<double>() > 0);

  write(d / "assign.json", R"({"restarts": 2, "stall_limit": 30})");
  REQUIRE(run({"assign", "--in", legs, "--config", s(d / "assign.json"), "--budget", "60", "--out",
               s(d / "asg")})
              .code == 0);
  const auto asg = gatehold::read_json(d / "asg" / "assign.json");
  CHECK(asg.at("budget") == 60);
  CHECK(asg.at("objective").get<double>() <= asg.at("initial_objective").get<double>());

  REQUIRE(run({"simulate", "--in", legs, "--n-star", "14", "--replications", "2", "--out", s(d / "cur")})
              .code == 0);
  REQUIRE(run({"simulate", "--in", legs, "--assignment", s(d / "asg" / "assignment.csv"), "--n-star", "14",
               "--replications", "2", "--out", s(d / "rob")})
              .code == 0);
  const auto m = gatehold::read_json(d / "cur" / "metrics.json");
  CHECK(m.at("n_star") == 14);
  CHECK(m.at("replications") == 2);
  CHECK(m.at("per_replication").size() == 2);
  CHECK(m.at("no_holding").at("gate_held_departures") == 0.0);

  REQUIRE(run({"report", "--in", s(d / "cur" / "metrics.json"), "--in", s(d / "rob" / "metrics.json"),
               "--out", s(d / "rep")})
              .code == 0);
  const auto md = slurp(d / "rep" / "report.md");
  CHECK(md.find("current, holding (N* = 14)") != std::string::npos);
  CHECK(md.find("assignment, no holding") != std::string::npos);

  const auto cal = run({"calibrate", "--in", s(d / "cur" / "events.csv"), "--out", s(d / "cal")});
  INFO(cal.err);
  REQUIRE(cal.code == 0);
  const auto cj = gatehold::read_json(d / "cal" / "calibration.json");
  CHECK(cj.at("schema_version") == gatehold::kSchemaVersion);
  CHECK(cj.at("lga_reference").at("published_mean") == doctest::Approx(0.5666));
  fs::remove_all(d);
}

TEST_CASE("study smoke run and byte-identical rerun") {
  const auto d = fresh_dir("study");
  write(d / "cfg.json", R"({"generator": {"flight_count": 200}, "sweep": false, "calibrate": false})");
  const std::vector<std::string> base{"study", "--profile", "lga", "--seed", "4", "--replications", "2",
                                      "--budget", "40", "--config", s(d / "cfg.json"), "--out"};
  auto a = base;
  a.push_back(s(d / "a"));
  auto b = base;
  b.push_back(s(d / "b"));
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  for (const auto& e : fs::directory_iterator(d / "a")) {
    const auto name = e.path().filename();
    CHECK_MESSAGE(slurp(e.path()) == slurp(d / "b" / name), name.string());
  }
  const auto r = gatehold::read_json(d / "a" / "report.json");
  CHECK(r.at("schema_version") == gatehold::kSchemaVersion);
  CHECK(r.at("replications") == 2);

  // gen-synthetic with the same seed reproduces the study's legs.
  REQUIRE(run({"gen-synthetic", "--seed", "4", "--config", s(d / "gen.json"), "--out", s(d / "g")}).code != 0);
  write(d / "gen.json", R"({"flight_count": 200})");
  REQUIRE(run({"gen-synthetic", "--seed", "4", "--config", s(d / "gen.json"), "--out", s(d / "g")}).code == 0);
  CHECK(slurp(d / "g" / "legs.csv") == slurp(d / "a" / "legs.csv"));
  fs::remove_all(d);
}
