#include "gatehold/cli.hpp"
#include "gatehold/csv.hpp"
#include "gatehold/error.hpp"
#include "gatehold/experiments.hpp"
#include "gatehold/json_io.hpp"
#include "gatehold/random.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace gatehold {

namespace fs = std::filesystem;

namespace {

// Seed streams shared with run_study, so `gen-synthetic --seed s` yields the
// legs of `study --seed s`.
constexpr std::uint64_t kStreamGenerator = 1;
constexpr std::uint64_t kStreamSimulation = 2;
constexpr std::uint64_t kStreamTabu = 100;

constexpr double kPublishedLgaMean = 0.5666;

struct Flags {
  std::vector<std::string> in;
  std::string out;
  std::string config;
  std::uint64_t seed = 1;
  std::string profile = "lga";
  int n_star = 0;
  int replications = 0;
  std::size_t budget = 0;
  std::string gates;
  std::string assignment;
  CLI::Option* n_star_opt = nullptr;
  CLI::Option* replications_opt = nullptr;
  CLI::Option* budget_opt = nullptr;
  bool seed_opt_set = false;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  auto j = read_json(path);
  if (!j.is_object()) throw Error(path + ": config must be a JSON object");
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

fs::path out_dir(const Flags& f) {
  fs::create_directories(f.out);
  return f.out;
}

const std::string& single_input(const Flags& f) {
  if (f.in.size() != 1) throw Error("expected exactly one --in file");
  return f.in.front();
}

std::string num(double v) { return csv::format_double(v); }

std::string opt_num(const std::optional<Minute>& v) { return v ? std::to_string(*v) : std::string{}; }

ShiftedLognormal delay_from_json(const Json& j, ShiftedLognormal d) {
  d.shift = j.value("shift", d.shift);
  d.mu_log = j.value("mu_log", d.mu_log);
  d.sigma_log = j.value("sigma_log", d.sigma_log);
  return d;
}

void apply_generator_config(GeneratorConfig& g, const Json& j) {
  if (j.contains("horizon")) g.horizon = {j["horizon"].at(0).get<Minute>(), j["horizon"].at(1).get<Minute>()};
  g.flight_count = j.value("flight_count", g.flight_count);
  g.mean_separation = j.value("mean_separation", g.mean_separation);
  g.separation_cv = j.value("separation_cv", g.separation_cv);
  g.min_separation = j.value("min_separation", g.min_separation);
  g.mean_occupancy = j.value("mean_occupancy", g.mean_occupancy);
  g.occupancy_cv = j.value("occupancy_cv", g.occupancy_cv);
  g.min_occupancy = j.value("min_occupancy", g.min_occupancy);
  g.min_turnaround = j.value("min_turnaround", g.min_turnaround);
  g.large_fraction = j.value("large_fraction", g.large_fraction);
  g.tow_fraction = j.value("tow_fraction", g.tow_fraction);
  if (j.contains("departure_delay")) g.departure_delay = delay_from_json(j["departure_delay"], g.departure_delay);
  if (j.contains("arrival_delay")) g.arrival_delay = delay_from_json(j["arrival_delay"], g.arrival_delay);
  if (j.contains("terminals")) {
    g.terminals.clear();
    for (const auto& t : j["terminals"])
      g.terminals.push_back({t.at("name").get<std::string>(), t.at("gates").get<int>(),
                             t.value("small_only_gates", 0),
                             t.at("airlines").get<std::vector<std::string>>()});
  }
  if (j.contains("banks")) {
    g.banks.clear();
    for (const auto& b : j["banks"])
      g.banks.push_back({b.at("center").get<Minute>(), b.value("width", Minute{60}), b.value("weight", 1.0)});
  }
}

SimConfig sim_from(const Flags& f, const Json& j) {
  auto cfg = sim_config(profile_by_name(f.profile), derive_seed(f.seed, kStreamSimulation));
  if (j.contains("n_star") && !j["n_star"].is_null()) cfg.n_star = j["n_star"].get<int>();
  cfg.replications = j.value("replications", cfg.replications);
  if (j.contains("takeoff")) cfg.takeoff = takeoff_from_json(j["takeoff"]);
  if (j.contains("taxi")) {
    cfg.taxi.clear();
    for (const auto& t : j["taxi"]) cfg.taxi.push_back(taxi_from_json(t));
  }
  if (j.contains("default_taxi")) cfg.default_taxi = taxi_from_json(j["default_taxi"]);
  cfg.tow_dwell = j.value("tow_dwell", cfg.tow_dwell);
  if (given(f.n_star_opt)) cfg.n_star = f.n_star;
  if (given(f.replications_opt)) cfg.replications = f.replications;
  cfg.validate();
  return cfg;
}

Json lga_reference() {
  return {{"params", to_json(kLgaTakeoffParams)},
          {"mean_from_params", takeoff_mean(kLgaTakeoffParams)},
          {"sigma_from_params", takeoff_sigma(kLgaTakeoffParams)},
          {"published_mean", kPublishedLgaMean},
          {"note",
           "the published mean capacity differs from the mean implied by the published rates "
           "and probabilities; the model uses the latter"}};
}

// gen-synthetic ----------------------------------------------------------------

int cmd_gen(const Flags& f, std::ostream& out) {
  auto profile = profile_by_name(f.profile);
  apply_generator_config(profile.generator, load_config(f.config));
  const auto legs = gen_synthetic(profile.generator, derive_seed(f.seed, kStreamGenerator));
  const auto turns = pair_schedule(legs);
  const auto dir = out_dir(f);
  save_schedule(dir / "legs.csv", legs);
  save_gates(dir / "gates.csv", legs.gates);
  const auto sep = current_separation_stats(legs.flights);
  write_json(dir / "summary.json",
             {{"profile", profile.name},
              {"seed", f.seed},
              {"legs", legs.flights.size()},
              {"turns", turns.flights.size()},
              {"gates", legs.gates.size()},
              {"horizon", {legs.horizon.start, legs.horizon.end}},
              {"separation", to_json(sep)},
              {"mean_occupancy_min", mean_turn_occupancy(turns.flights)}});
  out << "wrote " << legs.flights.size() << " legs to " << (dir / "legs.csv").string() << '\n';
  return 0;
}

// calibrate --------------------------------------------------------------------

double lognormal_cdf(double x, double mu, double sigma) {
  if (x <= 0) return 0.0;
  return 0.5 * std::erfc(-(std::log(x) - mu) / (sigma * std::sqrt(2.0)));
}

int cmd_calibrate(const Flags& f, std::ostream& out) {
  const auto j = load_config(f.config);
  CalibrationOptions o;
  o.slope_threshold = j.value("slope_threshold", o.slope_threshold);
  o.slope_window = j.value("slope_window", o.slope_window);
  o.min_curve_samples = j.value("min_curve_samples", o.min_curve_samples);
  o.capacity_span = j.value("capacity_span", o.capacity_span);
  o.npb_threshold = j.value("npb_threshold", o.npb_threshold);
  o.min_offset = j.value("min_offset", o.min_offset);
  o.max_offset = j.value("max_offset", o.max_offset);
  o.fit.step = j.value("step", o.fit.step);
  o.fit.c_max = j.value("c_max", o.fit.c_max);

  const auto events = load_events(single_input(f));
  const auto rep = calibrate(events, o);
  const auto dir = out_dir(f);

  auto doc = to_json(rep);
  doc["lga_reference"] = lga_reference();
  write_json(dir / "calibration.json", doc);

  std::ostringstream nt;
  nt << "minute,n,takeoff_rate\n";
  for (std::size_t i = 0; i < rep.series.n.size(); ++i)
    nt << rep.series.start + static_cast<Minute>(i) << ',' << rep.series.n[i] << ','
       << num(rep.series.rate[i]) << '\n';
  write_text(dir / "nt_series.csv", nt.str());

  std::ostringstream corr;
  corr << "offset,correlation\n";
  for (const auto& p : rep.correlation.points)
    corr << p.offset << ',' << (p.r ? num(*p.r) : std::string{}) << '\n';
  write_text(dir / "correlation.csv", corr.str());

  std::ostringstream curve;
  curve << "n,mean_rate,std_rate,samples\n";
  for (const auto& e : rep.curve.entries)
    curve << e.n << ',' << num(e.mean_rate) << ',' << num(e.std_rate) << ',' << e.samples << '\n';
  write_text(dir / "throughput_curve.csv", curve.str());

  std::ostringstream cap;
  cap << "takeoffs_per_window,empirical,model\n";
  const auto model = window_count_distribution(rep.takeoff.params, o.fit.step, o.fit.window);
  const auto rows = std::max(model.size(), rep.capacity.window_counts.size());
  for (std::size_t k = 0; k < rows; ++k)
    cap << k << ',' << num(k < rep.capacity.window_counts.size() ? rep.capacity.window_counts[k] : 0.0)
        << ',' << num(k < model.size() ? model[k] : 0.0) << '\n';
  write_text(dir / "capacity_distribution.csv", cap.str());

  std::ostringstream npb;
  npb << "npb,mean_taxi_min,std_taxi_min,samples\n";
  for (const auto& e : rep.taxi_by_npb)
    npb << e.n << ',' << num(e.mean_rate) << ',' << num(e.std_rate) << ',' << e.samples << '\n';
  write_text(dir / "taxi_by_npb.csv", npb.str());

  // Unimpeded taxi-out histogram per terminal with the fitted lognormal.
  const auto congestion = pushback_congestion(events);
  std::map<std::string, std::map<Minute, std::size_t>> hist;
  for (std::size_t i = 0; i < events.size(); ++i)
    if (congestion[i] < o.npb_threshold)
      ++hist[events[i].terminal][events[i].takeoff - events[i].pushback];
  std::ostringstream th;
  th << "terminal,taxi_min,count,fitted\n";
  for (const auto& fit : rep.taxi) {
    const auto it = hist.find(fit.terminal);
    if (it == hist.end()) continue;
    for (const auto& [m, c] : it->second) {
      const double x = static_cast<double>(m);
      const double p = lognormal_cdf(x + 0.5, fit.mu_log, fit.sigma_log) -
                       lognormal_cdf(x - 0.5, fit.mu_log, fit.sigma_log);
      th << fit.terminal << ',' << m << ',' << c << ',' << num(p * static_cast<double>(fit.samples)) << '\n';
    }
  }
  write_text(dir / "taxi_histogram.csv", th.str());

  out << "N* = " << rep.n_star << ", take-off c = (" << rep.takeoff.params.c1 << ", "
      << rep.takeoff.params.c2 << ", " << rep.takeoff.params.c3 << ")\n";
  return 0;
}

// fit-overlap ------------------------------------------------------------------

int cmd_fit_overlap(const Flags& f, std::ostream& out) {
  const auto j = load_config(f.config);
  const int lo = j.value("delay_min", -60);
  const int hi = j.value("delay_max", 240);
  const int max_sep = j.value("max_sep", 240);
  const auto s = load_schedule(single_input(f));
  const auto delays = delays_from_schedule(s, lo, hi);
  const auto d = fit_disturbance(delays, max_sep);
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : d.table) pts.emplace_back(row.sep, row.value.unconditional);
  const auto fit = fit_exponential(pts);

  const auto dir = out_dir(f);
  auto doc = to_json(d);
  doc["rms_log_residual"] = fit.rms_log_residual;
  doc["points"] = fit.points;
  doc["fit_target"] = "unconditional";
  doc["at_zero"] = to_json(overlap_at(delay_difference(delays), 0));
  write_json(dir / "overlap.json", doc);

  std::ostringstream os;
  os << "sep_min,probability,conditional_min,unconditional_min,fitted_min\n";
  for (const auto& row : d.table)
    os << row.sep << ',' << num(row.value.probability) << ',' << num(row.value.conditional) << ','
       << num(row.value.unconditional) << ',' << num(d(row.sep)) << '\n';
  write_text(dir / "overlap.csv", os.str());
  out << "A = " << d.A << ", B = " << d.B << '\n';
  return 0;
}

// assign -----------------------------------------------------------------------

int cmd_assign(const Flags& f, std::ostream& out) {
  const auto j = load_config(f.config);
  const fs::path sched_path = single_input(f);
  const fs::path gates_path = f.gates.empty() ? sched_path.parent_path() / "gates.csv" : fs::path(f.gates);
  auto legs = load_schedule(sched_path);
  legs.gates = load_gates(gates_path);
  const auto turns = pair_schedule(legs);

  const double A = j.value("A", 8.0);
  const double B = j.value("B", 0.97);
  const Minute t_buff = j.value("t_buff", Minute{0});
  TabuOptions opts;
  opts.tenure = j.value("tenure", opts.tenure);
  opts.budget = j.value("budget", opts.budget);
  opts.stall_limit = j.value("stall_limit", opts.stall_limit);
  opts.exchange_samples = j.value("exchange_samples", opts.exchange_samples);
  if (given(f.budget_opt)) opts.budget = f.budget;
  const std::uint64_t seed = f.seed_opt_set ? f.seed : j.value("seed", f.seed);
  const std::size_t restarts = j.value("restarts", std::size_t{4});

  const auto inst = ProblemInstance::from_schedule(turns, t_buff, A, B);
  std::optional<Assignment> current;
  GateMap current_map;
  bool have_current = true;
  for (const auto& fl : turns.flights) {
    if (!fl.current_gate) {
      have_current = false;
      break;
    }
    current_map[fl.id] = *fl.current_gate;
  }
  if (have_current) {
    auto a = from_gate_map(inst, current_map);
    if (check_feasible(inst, a).empty()) current = a;
  }
  const auto start = initial_assignment(inst, current);
  std::vector<std::uint64_t> seeds;
  for (std::size_t k = 0; k < std::max<std::size_t>(1, restarts); ++k)
    seeds.push_back(derive_seed(seed, kStreamTabu + k));
  const auto res = tabu_search_restarts(inst, start, opts, seeds);

  const auto dir = out_dir(f);
  save_gate_map(dir / "assignment.csv", to_gate_map(inst, res.best));
  Json doc = {{"A", A},
              {"B", B},
              {"t_buff", t_buff},
              {"seed", seed},
              {"restarts", seeds.size()},
              {"winning_seed", res.seed},
              {"budget", opts.budget},
              {"tenure", opts.tenure},
              {"iterations", res.iterations},
              {"initial_objective", res.initial_objective},
              {"objective", res.best_objective},
              {"trace", res.trace},
              {"separation", to_json(separation_stats(inst, res.best))},
              {"flights", inst.flights()},
              {"gates", inst.gates()}};
  if (current) {
    doc["current"] = {{"objective", objective(inst, *current)},
                      {"separation", to_json(separation_stats(inst, *current))}};
  }
  write_json(dir / "assign.json", doc);
  out << "objective " << res.initial_objective << " -> " << res.best_objective << '\n';
  return 0;
}

// simulate ---------------------------------------------------------------------

void write_trace(const fs::path& path, const SimOutcome& o) {
  std::ostringstream os;
  os << "flight_id,terminal,gate,gate_in,ready,pushback,runway,takeoff,hold_min,taxi_nominal_min,"
        "taxi_out_min,promoted,npb\n";
  for (const auto& r : o.flights) {
    os << csv::escape(r.flight) << ',' << csv::escape(r.terminal) << ',' << csv::escape(r.gate) << ','
       << opt_num(r.gate_in) << ',' << opt_num(r.ready) << ',' << opt_num(r.pushback) << ','
       << opt_num(r.runway) << ',' << opt_num(r.takeoff) << ',';
    if (r.is_departure())
      os << r.hold << ',' << r.taxi_nominal << ',' << (*r.takeoff - *r.pushback) << ','
         << (r.promoted ? 1 : 0) << ',' << r.npb;
    else
      os << ",,,,";
    os << '\n';
  }
  write_text(path, os.str());
}

void write_conflicts(const fs::path& path, const SimOutcome& o) {
  std::ostringstream os;
  os << "time,gate,arriving,blocking,overlap_min\n";
  for (const auto& c : o.conflicts)
    os << c.time << ',' << csv::escape(c.gate) << ',' << csv::escape(c.arriving) << ','
       << csv::escape(c.blocking) << ',' << c.overlap << '\n';
  write_text(path, os.str());
}

int cmd_simulate(const Flags& f, std::ostream& out) {
  const auto j = load_config(f.config);
  const auto cfg = sim_from(f, j);
  const auto turns = pair_schedule(load_schedule(single_input(f)));
  GateMap gate_of;
  std::string label = "current";
  if (!f.assignment.empty()) {
    gate_of = load_gate_map(f.assignment);
    label = fs::path(f.assignment).stem().string();
  } else {
    for (const auto& fl : turns.flights) {
      if (!fl.current_gate) throw Error("flight " + fl.id + " has no current gate; pass --assignment");
      gate_of[fl.id] = *fl.current_gate;
    }
  }
  label = j.value("label", label);

  auto off = cfg;
  off.n_star.reset();
  const auto base = run_replicated(turns, gate_of, off, true);
  Json doc = {{"label", label},
              {"replications", cfg.replications},
              {"n_star", cfg.n_star ? Json(*cfg.n_star) : Json(nullptr)},
              {"takeoff", to_json(cfg.takeoff)},
              {"static_conflicts", count_conflicts_static(turns, gate_of, cfg.tow_dwell)},
              {"no_holding", to_json(base.mean)}};
  const auto dir = out_dir(f);
  const SimOutcome* traced = &base.replications.front();
  std::optional<ReplicatedOutcome> held;
  if (cfg.n_star) {
    held = run_replicated(turns, gate_of, cfg, true);
    doc["holding"] = to_json(held->mean);
    traced = &held->replications.front();
  }
  Json per = Json::array();
  for (const auto& r : (held ? held->replications : base.replications)) per.push_back(to_json(r));
  doc["per_replication"] = per;

  if (j.contains("sweep")) {
    const int lo = j["sweep"].at("lo").get<int>();
    const int hi = j["sweep"].at("hi").get<int>();
    const auto sw = sweep_n_star(turns, gate_of, cfg, lo, hi);
    doc["sweep"] = to_json(sw);
    std::ostringstream os;
    os << "n_star,mean_hold_all_min,mean_taxi_min,sum_min,held_departures,conflicts\n";
    for (const auto& r : sw.rows)
      os << r.n_star << ',' << num(r.mean_hold_all) << ',' << num(r.mean_taxi) << ',' << num(r.total())
         << ',' << num(r.held_departures) << ',' << num(r.conflicts) << '\n';
    os << "none," << num(sw.baseline.mean_hold_all) << ',' << num(sw.baseline.mean_taxi) << ','
       << num(sw.baseline.total()) << ',' << num(sw.baseline.held_departures) << ','
       << num(sw.baseline.conflicts) << '\n';
    write_text(dir / "sweep.csv", os.str());
  }
  write_json(dir / "metrics.json", doc);
  write_trace(dir / "trace.csv", *traced);
  write_conflicts(dir / "conflicts.csv", *traced);
  save_events(dir / "events.csv", surface_events(base.replications.front()));
  out << label << ": " << base.mean.gate_conflicts << " conflicts without holding";
  if (held) out << ", " << held->mean.gate_conflicts << " with N* = " << *cfg.n_star;
  out << '\n';
  return 0;
}

// report -----------------------------------------------------------------------

int cmd_report(const Flags& f, std::ostream& out) {
  if (f.in.empty()) throw Error("report needs at least one --in metrics.json");
  std::vector<Json> docs;
  for (const auto& p : f.in) {
    auto d = read_json(p);
    if (!d.contains("no_holding")) throw Error(p + ": not a simulate metrics file");
    docs.push_back(std::move(d));
  }
  struct Column {
    std::string title;
    Json metrics;
  };
  std::vector<Column> cols;
  for (const auto& d : docs) {
    const auto label = d.value("label", std::string{"?"});
    cols.push_back({label + ", no holding", d["no_holding"]});
    if (d.contains("holding"))
      cols.push_back({label + ", holding (N* = " + std::to_string(d["n_star"].get<int>()) + ")", d["holding"]});
  }
  std::ostringstream md;
  md << "# Assignment comparison\n\n|";
  for (const auto& c : cols) md << " | " << c.title;
  md << " |\n|---";
  for (std::size_t i = 0; i < cols.size(); ++i) md << "|---";
  md << "|\n";
  const std::pair<const char*, const char*> rows[] = {
      {"Gate conflicts", "gate_conflicts"},
      {"Gate-held departures", "gate_held_departures"},
      {"Mean hold, held departures (min)", "mean_hold_held_min"},
      {"Mean hold, all departures (min)", "mean_hold_all_min"},
      {"Mean taxi-out (min)", "mean_taxi_out_min"},
      {"Departures", "departures"}};
  for (const auto& [title, key] : rows) {
    md << "| " << title;
    for (const auto& c : cols) {
      std::ostringstream v;
      v.setf(std::ios::fixed);
      v.precision(2);
      v << c.metrics.at(key).get<double>();
      md << " | " << v.str();
    }
    md << " |\n";
  }
  Json combined = Json::array();
  for (const auto& c : cols) combined.push_back({{"column", c.title}, {"metrics", c.metrics}});
  const auto dir = out_dir(f);
  write_text(dir / "report.md", md.str());
  write_json(dir / "report.json", {{"columns", combined}});
  out << "wrote " << (dir / "report.md").string() << '\n';
  return 0;
}

// study ------------------------------------------------------------------------

int cmd_study(const Flags& f, std::ostream& out) {
  const auto j = load_config(f.config);
  auto profile = profile_by_name(f.profile);
  if (j.contains("generator")) apply_generator_config(profile.generator, j["generator"]);
  StudyOptions o;
  if (given(f.n_star_opt)) o.n_star = f.n_star;
  if (given(f.replications_opt)) o.replications = f.replications;
  if (given(f.budget_opt)) o.budget = f.budget;
  o.sweep = j.value("sweep", true);
  o.calibrate = j.value("calibrate", true);
  const auto res = run_study(profile, f.seed, o);
  write_study(out_dir(f), res);
  const auto& r = res.report;
  out << r.profile << ": conflicts current " << r.cells[0][0].conflicts << " / " << r.cells[0][1].conflicts
      << ", robust " << r.cells[1][0].conflicts << " / " << r.cells[1][1].conflicts
      << " (no holding / N* = " << r.n_star << ")\n";
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Departure gate-holding simulation and robust gate assignment", "gatehold"};
  app.require_subcommand(1);
  Flags f;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", f.out, "Output directory")->required(); };
  auto add_in = [&](CLI::App* c, const char* what) {
    c->add_option("--in", f.in, what)->required()->check(CLI::ExistingFile);
  };
  auto add_config = [&](CLI::App* c) {
    c->add_option("--config", f.config, "JSON config overrides")->check(CLI::ExistingFile);
  };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", f.seed, "Master seed")->capture_default_str(); };
  auto add_profile = [&](CLI::App* c) {
    c->add_option("--profile", f.profile, "Airport profile")
        ->check(CLI::IsMember({"lga", "hub"}))
        ->capture_default_str();
  };
  auto add_n_star = [&](CLI::App* c) {
    c->add_option("--n-star", f.n_star, "Gate-holding threshold N*")->check(CLI::PositiveNumber);
  };
  auto add_reps = [&](CLI::App* c) {
    c->add_option("--replications", f.replications, "Simulation replications")->check(CLI::PositiveNumber);
  };
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--budget", f.budget, "Tabu iteration budget");
  };

  auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic schedule and gate list");
  add_profile(gen);
  add_config(gen);
  add_seed(gen);
  add_out(gen);

  auto* cal = app.add_subcommand("calibrate", "Fit N*, take-off and taxi-out models to surface events");
  add_in(cal, "Events CSV (flight_id, pushback_min, takeoff_min, terminal)");
  add_config(cal);
  add_out(cal);

  auto* fit = app.add_subcommand("fit-overlap", "Fit the A*B^sep disturbance model to schedule delays");
  add_in(fit, "Schedule CSV with actual times");
  add_config(fit);
  add_out(fit);

  auto* asg = app.add_subcommand("assign", "Robust gate assignment by tabu search");
  add_in(asg, "Schedule CSV");
  asg->add_option("--gates", f.gates, "Gates CSV (default: gates.csv beside the schedule)")
      ->check(CLI::ExistingFile);
  add_config(asg);
  auto* asg_seed = asg->add_option("--seed", f.seed, "Tabu seed")->capture_default_str();
  add_budget(asg);
  add_out(asg);

  auto* sim = app.add_subcommand("simulate", "Simulate departures with and without gate holding");
  add_in(sim, "Schedule CSV with actual times");
  sim->add_option("--assignment", f.assignment, "Assignment CSV (default: current gates)")
      ->check(CLI::ExistingFile);
  add_profile(sim);
  add_config(sim);
  add_seed(sim);
  add_n_star(sim);
  add_reps(sim);
  add_out(sim);

  auto* rep = app.add_subcommand("report", "Side-by-side comparison of simulate outputs");
  add_in(rep, "metrics.json files from simulate");
  add_out(rep);

  auto* study = app.add_subcommand("study", "End-to-end study for an airport profile");
  add_profile(study);
  add_config(study);
  add_seed(study);
  add_n_star(study);
  add_reps(study);
  add_budget(study);
  add_out(study);


  std::vector<const char*> argv{"gatehold"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    auto* cmd = app.get_subcommands().front();
    const auto& name = cmd->get_name();
    f.n_star_opt = cmd->get_option_no_throw("--n-star");
    f.replications_opt = cmd->get_option_no_throw("--replications");
    f.budget_opt = cmd->get_option_no_throw("--budget");
    if (name == "gen-synthetic") return cmd_gen(f, out);
    if (name == "calibrate") return cmd_calibrate(f, out);
    if (name == "fit-overlap") return cmd_fit_overlap(f, out);
    if (name == "assign") {
      f.seed_opt_set = asg_seed->count() > 0;
      return cmd_assign(f, out);
    }
    if (name == "simulate") return cmd_simulate(f, out);
    if (name == "report") return cmd_report(f, out);
    if (name == "study") return cmd_study(f, out);
    err << "gatehold: unknown subcommand " << name << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "gatehold: error: " << e.what() << '\n';
    return 1;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace gatehold
