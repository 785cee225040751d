#include "gatehold/experiments.hpp"
#include "gatehold/csv.hpp"
#include "gatehold/error.hpp"
#include "gatehold/json_io.hpp"
#include "gatehold/random.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gatehold {

namespace {

// Per-stage seed streams under the study seed.
constexpr std::uint64_t kStreamGenerator = 1;
constexpr std::uint64_t kStreamSimulation = 2;
constexpr std::uint64_t kStreamCalibration = 3;
constexpr std::uint64_t kStreamTabu = 100;

// Replications are laid end to end this far apart when pooling events for
// calibration, so that no aircraft of one day overlaps the next.
constexpr Minute kReplicationOffset = 3 * 1440;

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

std::vector<Bank> banks_every(Minute first, Minute last, Minute step, Minute width, double weight) {
  std::vector<Bank> out;
  for (Minute c = first; c <= last; c += step) out.push_back({c, width, weight});
  return out;
}

}  // namespace

void AirportProfile::validate() const {
  if (n_star_default < 1) throw Error("profile " + name + ": n_star_default must be >= 1");
  if (sweep_hi < sweep_lo || sweep_lo < 1) throw Error("profile " + name + ": bad sweep range");
  if (replications < 1) throw Error("profile " + name + ": replications must be >= 1");
  if (generator.terminals.empty()) throw Error("profile " + name + ": no terminals");
  takeoff.validate();
}

AirportProfile lga_profile() {
  AirportProfile p;
  p.name = "lga";
  auto& g = p.generator;
  g.terminals = {
      {"A", 10, 6, {"EV", "NK"}},
      {"B", 34, 6, {"AA", "UA", "WN"}},
      {"C", 22, 8, {"US", "B6"}},
      {"D", 12, 2, {"DL"}},
  };
  g.banks = banks_every(420, 1260, 120, 45, 0.8);
  p.takeoff = kLgaTakeoffParams;
  p.taxi = {{"A", 2.70, 0.30, 0}, {"B", 2.85, 0.30, 0}, {"C", 2.75, 0.30, 0}, {"D", 2.80, 0.30, 0}};
  p.default_taxi = {"", 2.80, 0.30, 0};
  p.n_star_default = 14;
  p.sweep_lo = 10;
  p.sweep_hi = 20;
  return p;
}

AirportProfile hub_profile() {
  AirportProfile p;
  p.name = "hub";
  auto& g = p.generator;
  g.terminals = {
      {"T", 22, 4, {"CA"}},  {"A", 24, 0, {"CA"}}, {"B", 24, 4, {"CA"}},
      {"C", 22, 4, {"CA", "CB"}}, {"D", 22, 6, {"CB", "CC"}}, {"E", 18, 0, {"CA", "CC"}},
  };
  g.mean_separation = 105.0;
  g.banks = banks_every(420, 1320, 90, 20, 2.5);
  // Two departure runways served as one aggregate process.
  p.takeoff = {0.8, 1.4, 1.1, 0.3, 0.3};
  p.taxi = {};
  p.default_taxi = {"", 2.90, 0.30, 0};
  p.n_star_default = 33;
  p.sweep_lo = 25;
  p.sweep_hi = 40;
  return p;
}

AirportProfile profile_by_name(const std::string& name) {
  if (name == "lga") return lga_profile();
  if (name == "hub") return hub_profile();
  throw Error("unknown profile '" + name + "' (expected lga or hub)");
}

CellMetrics CellMetrics::from(const SimOutcome& m) {
  return {m.gate_conflicts, m.gate_held_departures, m.mean_hold_min,
          m.mean_hold_all_min, m.mean_taxi_out_min, m.departures};
}

double ComparisonReport::held_fraction(int assignment) const {
  const auto& c = cells[assignment][1];
  return c.departures > 0 ? c.held / c.departures : 0.0;
}

SimConfig sim_config(const AirportProfile& profile, std::uint64_t seed) {
  SimConfig cfg;
  cfg.replications = profile.replications;
  cfg.seed = seed;
  cfg.takeoff = profile.takeoff;
  cfg.taxi = profile.taxi;
  cfg.default_taxi = profile.default_taxi;
  return cfg;
}

int select_n_star(const Sweep& sweep, double tolerance) {
  if (!(tolerance > 0)) throw Error("select_n_star: tolerance must be positive");
  for (const auto& row : sweep.rows)
    if (std::abs(row.total() - sweep.baseline.mean_taxi) <= tolerance) return row.n_star;
  throw Error("select_n_star: no N* within tolerance of the no-holding taxi time");
}

StudyResult run_study(const AirportProfile& profile, std::uint64_t seed,
                      const StudyOptions& options) {
  profile.validate();
  StudyResult res;
  auto& rep = res.report;
  rep.profile = profile.name;
  rep.seed = seed;
  rep.n_star = options.n_star.value_or(profile.n_star_default);
  rep.replications = options.replications.value_or(profile.replications);
  rep.takeoff = profile.takeoff;
  rep.takeoff_mu = takeoff_mean(profile.takeoff);
  rep.takeoff_sigma = takeoff_sigma(profile.takeoff);

  res.legs = stage("generate", [&] {
    return gen_synthetic(profile.generator, derive_seed(seed, kStreamGenerator));
  });
  res.turns = stage("pair", [&] { return pair_schedule(res.legs); });
  rep.legs = res.legs.flights.size();
  rep.turns = res.turns.flights.size();
  rep.gates = res.turns.gates.size();

  res.disturbance = stage("fit-overlap", [&] {
    const auto delays = delays_from_schedule(res.legs);
    auto d = fit_disturbance(delays);
    rep.overlap_at_zero = overlap_at(delay_difference(delays), 0);
    return d;
  });
  rep.A = res.disturbance.A;
  rep.B = res.disturbance.B;
  {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : res.disturbance.table)
      pts.emplace_back(row.sep, row.value.unconditional);
    rep.fit_rms = fit_exponential(pts).rms_log_residual;
  }

  stage("assign", [&] {
    const auto inst =
        ProblemInstance::from_schedule(res.turns, profile.t_buff, res.disturbance.A, res.disturbance.B);
    for (const auto& f : res.turns.flights) {
      if (!f.current_gate) throw Error("flight " + f.id + " has no current gate");
      res.baseline[f.id] = *f.current_gate;
    }
    const auto current = from_gate_map(inst, res.baseline);
    const bool current_ok = check_feasible(inst, current).empty();
    const auto start = initial_assignment(inst, current_ok ? std::optional(current) : std::nullopt);
    auto opts = profile.tabu;
    if (options.budget) opts.budget = *options.budget;
    std::vector<std::uint64_t> seeds;
    for (std::size_t k = 0; k < std::max<std::size_t>(1, profile.restarts); ++k)
      seeds.push_back(derive_seed(seed, kStreamTabu + k));
    res.tabu = tabu_search_restarts(inst, start, opts, seeds);
    res.robust = to_gate_map(inst, res.tabu.best);

    rep.baseline = {"current", objective_unchecked(inst, current), separation_stats(inst, current),
                    count_conflicts_static(res.turns, res.baseline)};
    rep.robust = {"robust", res.tabu.best_objective, separation_stats(inst, res.tabu.best),
                  count_conflicts_static(res.turns, res.robust)};
    return 0;
  });

  auto cfg = sim_config(profile, derive_seed(seed, kStreamSimulation));
  cfg.replications = rep.replications;
  const GateMap* maps[2] = {&res.baseline, &res.robust};
  stage("simulate", [&] {
    for (int a = 0; a < 2; ++a) {
      auto off = cfg;
      off.n_star.reset();
      rep.cells[a][0] = CellMetrics::from(run_replicated(res.turns, *maps[a], off).mean);
      auto on = cfg;
      on.n_star = rep.n_star;
      rep.cells[a][1] = CellMetrics::from(run_replicated(res.turns, *maps[a], on).mean);
    }
    return 0;
  });

  if (options.sweep) {
    stage("sweep", [&] {
      rep.sweep_baseline = sweep_n_star(res.turns, res.baseline, cfg, profile.sweep_lo, profile.sweep_hi);
      rep.sweep_robust = sweep_n_star(res.turns, res.robust, cfg, profile.sweep_lo, profile.sweep_hi);
      try {
        rep.selected_n_star = select_n_star(rep.sweep_baseline, profile.n_star_tolerance);
      } catch (const Error&) {
        rep.selected_n_star.reset();
      }
      return 0;
    });
  }

  if (options.calibrate) {
    auto cal = cfg;
    cal.seed = derive_seed(seed, kStreamCalibration);
    cal.n_star.reset();
    const auto runs = stage("calibrate", [&] { return run_replicated(res.turns, res.baseline, cal, true); });
    for (std::size_t r = 0; r < runs.replications.size(); ++r) {
      const Minute shift = static_cast<Minute>(r) * kReplicationOffset;
      for (auto e : surface_events(runs.replications[r])) {
        e.pushback += shift;
        e.takeoff += shift;
        res.events.push_back(std::move(e));
      }
    }
    // A day of synthetic traffic need not saturate the runway; the study
    // keeps going and records why calibration stopped.
    try {
      res.calibration = calibrate(res.events);
      rep.calibrated_n_star = res.calibration->n_star;
      rep.calibrated_takeoff = res.calibration->takeoff;
      rep.correlation_offset = res.calibration->correlation.best_offset;
      rep.calibrated_taxi = res.calibration->taxi;
    } catch (const Error& e) {
      rep.calibration_note = e.what();
    }
  }
  return res;
}

namespace {

std::string fmt(double v, int digits = 1) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void write_sweep_csv(const std::filesystem::path& path, const Sweep& s) {
  std::ostringstream os;
  os << "n_star,mean_hold_all_min,mean_taxi_min,sum_min,held_departures,conflicts\n";
  auto row = [&](const std::string& n, const SweepRow& r) {
    os << n << ',' << csv::format_double(r.mean_hold_all) << ',' << csv::format_double(r.mean_taxi)
       << ',' << csv::format_double(r.total()) << ',' << csv::format_double(r.held_departures) << ','
       << csv::format_double(r.conflicts) << '\n';
  };
  for (const auto& r : s.rows) row(std::to_string(r.n_star), r);
  row("none", s.baseline);
  write_text(path, os.str());
}

}  // namespace

std::string render_markdown(const ComparisonReport& r) {
  std::ostringstream os;
  os << "# Gate holding study: " << r.profile << " (seed " << r.seed << ")\n\n";
  os << r.legs << " legs paired into " << r.turns << " gate visits over " << r.gates
     << " gates; " << r.replications << " replications per cell.\n\n";
  os << "## Gate assignment and gate holding (N* = " << r.n_star << ")\n\n";
  os << "| | Current, no holding | Current, holding | Robust, no holding | Robust, holding |\n";
  os << "|---|---|---|---|---|\n";
  auto line = [&](const char* label, auto get, int digits) {
    os << "| " << label;
    for (int a = 0; a < 2; ++a)
      for (int h = 0; h < 2; ++h) os << " | " << fmt(get(r.cells[a][h]), digits);
    os << " |\n";
  };
  line("Gate conflicts", [](const CellMetrics& c) { return c.conflicts; }, 1);
  line("Gate-held departures", [](const CellMetrics& c) { return c.held; }, 1);
  line("Mean hold, held departures (min)", [](const CellMetrics& c) { return c.mean_hold; }, 1);
  line("Mean hold, all departures (min)", [](const CellMetrics& c) { return c.mean_hold_all; }, 2);
  line("Mean taxi-out (min)", [](const CellMetrics& c) { return c.mean_taxi; }, 1);
  line("Departures", [](const CellMetrics& c) { return c.departures; }, 0);

  os << "\n## Gate separation\n\n| | Mean (min) | Std (min) | Pairs | Objective | Static conflicts |\n";
  os << "|---|---|---|---|---|---|\n";
  for (const auto* s : {&r.baseline, &r.robust})
    os << "| " << s->name << " | " << fmt(s->separation.mean) << " | " << fmt(s->separation.stddev)
       << " | " << s->separation.pairs << " | " << fmt(s->objective, 2) << " | "
       << s->static_conflicts << " |\n";

  os << "\n## Models\n\n";
  os << "- Take-off: c = (" << r.takeoff.c1 << ", " << r.takeoff.c2 << ", " << r.takeoff.c3
     << "), p = (" << r.takeoff.p1 << ", " << r.takeoff.p2 << "); mean " << fmt(r.takeoff_mu, 4)
     << " /min, 10-minute sigma " << fmt(r.takeoff_sigma, 4) << " /min.\n";
  os << "- Disturbance: A = " << fmt(r.A, 3) << ", B = " << fmt(r.B, 4) << " (log rms "
     << fmt(r.fit_rms, 3) << "). At separation 0: P(overlap) = "
     << fmt(r.overlap_at_zero.probability, 3) << ", E[overlap | overlap] = "
     << fmt(r.overlap_at_zero.conditional, 2) << " min, E[overlap] = "
     << fmt(r.overlap_at_zero.unconditional, 2) << " min.\n";
  if (r.calibrated_n_star) {
    os << "- Calibration on simulated no-holding traffic: saturation at N = " << *r.calibrated_n_star;
    if (r.correlation_offset) os << ", N/T correlation peaks at offset " << *r.correlation_offset;
    os << ".\n";
  } else if (!r.calibration_note.empty()) {
    os << "- Calibration skipped: " << r.calibration_note << "\n";
  }

  auto sweep_table = [&](const char* title, const Sweep& s) {
    if (s.rows.empty()) return;
    os << "\n## " << title << "\n\n| N* | Hold, all departures | Taxi-out | Sum |\n|---|---|---|---|\n";
    for (const auto& row : s.rows)
      os << "| " << row.n_star << " | " << fmt(row.mean_hold_all, 2) << " | " << fmt(row.mean_taxi, 2)
         << " | " << fmt(row.total(), 2) << " |\n";
    os << "| none | " << fmt(s.baseline.mean_hold_all, 2) << " | " << fmt(s.baseline.mean_taxi, 2)
       << " | " << fmt(s.baseline.total(), 2) << " |\n";
  };
  sweep_table("N* sweep, current assignment", r.sweep_baseline);
  sweep_table("N* sweep, robust assignment", r.sweep_robust);
  if (r.selected_n_star) os << "\nSmallest N* within tolerance: " << *r.selected_n_star << "\n";
  return os.str();
}

void write_study(const std::filesystem::path& dir, const StudyResult& res) {
  std::filesystem::create_directories(dir);
  save_schedule(dir / "legs.csv", res.legs);
  save_schedule(dir / "turns.csv", res.turns);
  save_gates(dir / "gates.csv", res.turns.gates);
  save_gate_map(dir / "assignment_current.csv", res.baseline);
  save_gate_map(dir / "assignment_robust.csv", res.robust);

  {
    std::ostringstream os;
    os << "sep_min,probability,conditional_min,unconditional_min,fitted_min\n";
    for (const auto& row : res.disturbance.table)
      os << row.sep << ',' << csv::format_double(row.value.probability) << ','
         << csv::format_double(row.value.conditional) << ','
         << csv::format_double(row.value.unconditional) << ','
         << csv::format_double(res.disturbance(row.sep)) << '\n';
    write_text(dir / "overlap.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "iteration,best_objective\n";
    for (std::size_t i = 0; i < res.tabu.trace.size(); ++i)
      os << i + 1 << ',' << csv::format_double(res.tabu.trace[i]) << '\n';
    write_text(dir / "tabu_trace.csv", os.str());
  }
  if (!res.report.sweep_baseline.rows.empty()) {
    write_sweep_csv(dir / "sweep_current.csv", res.report.sweep_baseline);
    write_sweep_csv(dir / "sweep_robust.csv", res.report.sweep_robust);
  }
  if (!res.events.empty()) save_events(dir / "events.csv", res.events);
  if (res.calibration) write_json(dir / "calibration.json", to_json(*res.calibration));

  write_json(dir / "report.json", to_json(res.report));
  write_text(dir / "report.md", render_markdown(res.report));
}

}  // namespace gatehold
