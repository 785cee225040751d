#include "gatehold/json_io.hpp"
#include "gatehold/error.hpp"

#include <fstream>

namespace gatehold {

Json to_json(const TakeoffParams& p) {
  return {{"c1", p.c1}, {"c2", p.c2}, {"c3", p.c3}, {"p1", p.p1}, {"p2", p.p2}, {"p3", p.p3()}};
}

TakeoffParams takeoff_from_json(const Json& j) {
  TakeoffParams p{j.at("c1").get<double>(), j.at("c2").get<double>(), j.at("c3").get<double>(),
                  j.at("p1").get<double>(), j.at("p2").get<double>()};
  p.validate();
  return p;
}

Json to_json(const TaxiFit& t) {
  return {{"terminal", t.terminal}, {"mu_log", t.mu_log}, {"sigma_log", t.sigma_log},
          {"samples", t.samples}};
}

TaxiFit taxi_from_json(const Json& j) {
  TaxiFit t{j.value("terminal", std::string{}), j.at("mu_log").get<double>(),
            j.at("sigma_log").get<double>(), j.value("samples", std::size_t{0})};
  if (!(t.sigma_log > 0)) throw Error("taxi fit needs sigma_log > 0");
  return t;
}

namespace {

Json entries(const std::vector<ThroughputEntry>& v) {
  Json a = Json::array();
  for (const auto& e : v)
    a.push_back({{"n", e.n}, {"mean", e.mean_rate}, {"std", e.std_rate}, {"samples", e.samples}});
  return a;
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json cell(const CellMetrics& c) {
  return {{"gate_conflicts", c.conflicts},
          {"gate_held_departures", c.held},
          {"mean_hold_held_min", c.mean_hold},
          {"mean_hold_all_min", c.mean_hold_all},
          {"mean_taxi_out_min", c.mean_taxi},
          {"departures", c.departures}};
}

Json summary(const AssignmentSummary& s) {
  return {{"name", s.name},
          {"objective", s.objective},
          {"separation", to_json(s.separation)},
          {"static_conflicts", s.static_conflicts}};
}

}  // namespace

Json to_json(const ThroughputCurve& c) { return entries(c.entries); }

Json to_json(const CalibrationReport& r) {
  Json corr = Json::array();
  for (const auto& p : r.correlation.points)
    corr.push_back({{"offset", p.offset}, {"r", p.r ? Json(*p.r) : Json(nullptr)}});
  Json taxi = Json::array();
  for (const auto& t : r.taxi) taxi.push_back(to_json(t));
  return {{"throughput_curve", to_json(r.curve)},
          {"n_star", r.n_star},
          {"correlation", corr},
          {"correlation_best_offset", optional_int(r.correlation.best_offset)},
          {"capacity",
           {{"mean", r.capacity.mean_rate},
            {"std", r.capacity.std_rate},
            {"samples", r.capacity.samples},
            {"window_counts", r.capacity.window_counts}}},
          {"takeoff_params", to_json(r.takeoff.params)},
          {"takeoff_fit_distance", r.takeoff.distance},
          {"takeoff_model_mean", takeoff_mean(r.takeoff.params)},
          {"takeoff_model_sigma", takeoff_sigma(r.takeoff.params)},
          {"taxi_fits", taxi},
          {"taxi_by_npb", entries(r.taxi_by_npb)}};
}

Json to_json(const OverlapValue& v) {
  return {{"probability", v.probability},
          {"conditional_min", v.conditional},
          {"unconditional_min", v.unconditional}};
}

Json to_json(const DisturbanceModel& d) {
  Json table = Json::array();
  for (const auto& row : d.table) {
    Json e = to_json(row.value);
    e["sep"] = row.sep;
    table.push_back(std::move(e));
  }
  return {{"A", d.A}, {"B", d.B}, {"table", table}};
}

Json to_json(const SeparationStats& s) {
  return {{"pairs", s.pairs}, {"mean_min", s.mean}, {"std_min", s.stddev}};
}

Json to_json(const SimOutcome& m) {
  return {{"gate_conflicts", m.gate_conflicts},
          {"gate_held_departures", m.gate_held_departures},
          {"mean_hold_held_min", m.mean_hold_min},
          {"mean_hold_all_min", m.mean_hold_all_min},
          {"mean_taxi_out_min", m.mean_taxi_out_min},
          {"departures", m.departures}};
}

Json to_json(const Sweep& s) {
  Json rows = Json::array();
  auto row = [](const SweepRow& r) {
    return Json{{"n_star", r.n_star},
                {"mean_hold_all_min", r.mean_hold_all},
                {"mean_taxi_min", r.mean_taxi},
                {"sum_min", r.total()},
                {"held_departures", r.held_departures},
                {"conflicts", r.conflicts}};
  };
  for (const auto& r : s.rows) rows.push_back(row(r));
  Json base = row(s.baseline);
  base.erase("n_star");
  return {{"rows", rows}, {"no_holding", base}};
}

Json to_json(const ComparisonReport& r) {
  Json cells = Json::object();
  const char* names[2] = {"current", "robust"};
  for (int a = 0; a < 2; ++a)
    cells[names[a]] = {{"no_holding", cell(r.cells[a][0])}, {"holding", cell(r.cells[a][1])}};
  Json taxi = Json::array();
  for (const auto& t : r.calibrated_taxi) taxi.push_back(to_json(t));
  Json j = {
      {"profile", r.profile},
      {"seed", r.seed},
      {"n_star", r.n_star},
      {"replications", r.replications},
      {"legs", r.legs},
      {"turns", r.turns},
      {"gates", r.gates},
      {"takeoff", {{"params", to_json(r.takeoff)}, {"mean", r.takeoff_mu}, {"sigma", r.takeoff_sigma}}},
      {"disturbance",
       {{"A", r.A}, {"B", r.B}, {"rms_log_residual", r.fit_rms}, {"at_zero", to_json(r.overlap_at_zero)}}},
      {"assignments", {{"current", summary(r.baseline)}, {"robust", summary(r.robust)}}},
      {"cells", cells},
      {"held_fraction", {{"current", r.held_fraction(0)}, {"robust", r.held_fraction(1)}}},
      {"selected_n_star", optional_int(r.selected_n_star)},
      {"calibration",
       {{"n_star", optional_int(r.calibrated_n_star)},
        {"correlation_best_offset", optional_int(r.correlation_offset)},
        {"takeoff_params", r.calibrated_takeoff ? to_json(r.calibrated_takeoff->params) : Json(nullptr)},
        {"taxi_fits", taxi},
        {"note", r.calibration_note}}},
  };
  if (!r.sweep_baseline.rows.empty())
    j["sweeps"] = {{"current", to_json(r.sweep_baseline)}, {"robust", to_json(r.sweep_robust)}};
  return j;
}

void write_json(const std::filesystem::path& path, Json j) {
  j["schema_version"] = kSchemaVersion;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace gatehold
