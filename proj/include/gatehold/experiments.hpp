#pragma once

#include "gatehold/assignment.hpp"
#include "gatehold/calibration.hpp"
#include "gatehold/generator.hpp"
#include "gatehold/overlap.hpp"
#include "gatehold/simulation.hpp"
#include "gatehold/tabu.hpp"
#include "gatehold/takeoff.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gatehold {

struct AirportProfile {
  std::string name;
  GeneratorConfig generator;
  TakeoffParams takeoff;
  std::vector<TaxiFit> taxi;
  TaxiFit default_taxi{"", 2.7, 0.3, 0};
  int n_star_default = 14;
  int sweep_lo = 10;
  int sweep_hi = 20;
  int replications = 15;
  Minute t_buff = 0;
  TabuOptions tabu;
  /// Independent tabu restarts; seeds are derived from the study seed.
  std::size_t restarts = 4;
  /// Minutes of slack allowed when picking N* from the sweep.
  double n_star_tolerance = 1.0;

  void validate() const;
};

/// Single departure runway, busy gates, saturation near 14-15.
AirportProfile lga_profile();
/// Two-runway hub with aggregate service and saturation near 40.
AirportProfile hub_profile();
/// "lga" or "hub".
AirportProfile profile_by_name(const std::string& name);

/// Metrics of one (assignment, holding) cell.
struct CellMetrics {
  double conflicts = 0;
  double held = 0;
  double mean_hold = 0;      // over held departures
  double mean_hold_all = 0;  // over all departures
  double mean_taxi = 0;
  double departures = 0;

  static CellMetrics from(const SimOutcome& mean);
};

struct AssignmentSummary {
  std::string name;
  double objective = 0;
  SeparationStats separation;
  std::size_t static_conflicts = 0;
};

struct ComparisonReport {
  std::string profile;
  std::uint64_t seed = 0;
  int n_star = 0;
  int replications = 0;
  std::size_t legs = 0;
  std::size_t turns = 0;
  std::size_t gates = 0;

  double takeoff_mu = 0;
  double takeoff_sigma = 0;
  TakeoffParams takeoff;

  double A = 0;
  double B = 0;
  double fit_rms = 0;
  OverlapValue overlap_at_zero;

  AssignmentSummary baseline;
  AssignmentSummary robust;
  /// cells[assignment][holding]: assignment 0 = baseline, 1 = robust;
  /// holding 0 = off, 1 = on at n_star.
  CellMetrics cells[2][2];

  Sweep sweep_baseline;
  Sweep sweep_robust;
  /// Smallest N* of the baseline sweep within tolerance of no-holding taxi.
  std::optional<int> selected_n_star;

  /// Calibration run on the simulated no-holding surface events.
  std::optional<int> calibrated_n_star;
  std::optional<TakeoffFit> calibrated_takeoff;
  std::optional<int> correlation_offset;
  std::vector<TaxiFit> calibrated_taxi;
  std::string calibration_note;

  [[nodiscard]] double held_fraction(int assignment) const;
};

struct StudyResult {
  ComparisonReport report;
  Schedule legs;
  Schedule turns;
  GateMap baseline;
  GateMap robust;
  DisturbanceModel disturbance;
  TabuResult tabu;
  std::optional<CalibrationReport> calibration;
  std::vector<SurfaceEvent> events;
};

struct StudyOptions {
  /// Overrides the profile's N* for the holding cells.
  std::optional<int> n_star;
  std::optional<int> replications;
  std::optional<std::size_t> budget;
  /// Skip the N* sweeps.
  bool sweep = true;
  /// Skip the calibration stage.
  bool calibrate = true;
};

/// gen_synthetic, pairing, delay fit, robust assignment, sweeps, the four
/// cells and a calibration pass. Stage failures are rethrown as
/// "<stage>: <message>".
StudyResult run_study(const AirportProfile& profile, std::uint64_t seed,
                      const StudyOptions& options = {});

/// Writes every study artifact plus report.json and report.md into `dir`.
void write_study(const std::filesystem::path& dir, const StudyResult& result);

/// Smallest N* whose hold + taxi stays within `tolerance` minutes of the
/// no-holding taxi mean. Throws for tolerance <= 0 or when none qualifies.
int select_n_star(const Sweep& sweep, double tolerance);

/// Simulation settings of a profile.
SimConfig sim_config(const AirportProfile& profile, std::uint64_t seed);

/// Markdown tables for a report.
std::string render_markdown(const ComparisonReport& report);

}  // namespace gatehold
