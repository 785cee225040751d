#pragma once

#include "gatehold/calibration.hpp"
#include "gatehold/schedule.hpp"
#include "gatehold/takeoff.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gatehold {

struct SimConfig {
  /// Gate-holding threshold; holding is off when empty.
  std::optional<int> n_star;
  int replications = 15;
  std::uint64_t seed = 1;
  TakeoffParams takeoff = kLgaTakeoffParams;
  /// Nominal taxi-out per terminal; `default_taxi` covers unlisted ones.
  std::vector<TaxiFit> taxi;
  TaxiFit default_taxi{"", 2.7, 0.3, 0};
  Minute tow_dwell = kDefaultTowDwell;
  /// Simulation stops with an error this many minutes past the last event.
  Minute max_overrun = 7 * 1440;

  void validate() const;
  [[nodiscard]] const TaxiFit& taxi_for(const std::string& terminal) const;
};

/// A gate request met by an occupied gate.
struct GateConflictEvent {
  std::string arriving;
  std::string gate;
  std::string blocking;
  Minute time = 0;
  /// Minutes the gate would have stayed blocked without promotion: the
  /// blocker's own ready time minus the request time, at least one minute.
  Minute overlap = 0;
};

struct FlightRecord {
  std::string flight;
  std::string terminal;
  std::string gate;
  std::optional<Minute> gate_in;
  std::optional<Minute> ready;     // push-back queue entry
  std::optional<Minute> pushback;  // push-back clearance
  std::optional<Minute> runway;    // runway queue entry
  std::optional<Minute> takeoff;
  Minute hold = 0;
  Minute taxi_nominal = 0;
  bool promoted = false;
  int npb = 0;

  [[nodiscard]] bool is_departure() const { return ready.has_value(); }
};

struct SimOutcome {
  double gate_conflicts = 0;
  double gate_held_departures = 0;
  /// Mean hold over held departures (0 when none held).
  double mean_hold_min = 0;
  /// Mean hold over all departures.
  double mean_hold_all_min = 0;
  double mean_taxi_out_min = 0;
  double departures = 0;
  std::vector<FlightRecord> flights;
  std::vector<GateConflictEvent> conflicts;
};

/// One replication of the departure process on a minute grid. Each minute:
/// gate requests arrive (a request for an occupied gate is a conflict and
/// force-clears the blocking departure), tows off the gate finish, ready
/// departures join the push-back queue, taxiing aircraft reach the runway
/// queue, the runway serves take-offs, and finally push-backs are cleared
/// FCFS (only while N < N* when holding is on). Same-minute events are ordered
/// by flight id.
/// `gate_of` maps every flight id of `schedule` to a gate.
SimOutcome run_once(const Schedule& schedule, const GateMap& gate_of, const SimConfig& config,
                    std::uint64_t replication_seed);

struct ReplicatedOutcome {
  /// Metric means across replications (no per-flight records).
  SimOutcome mean;
  std::vector<SimOutcome> replications;
};

/// Seed of replication `index` under `config.seed`.
std::uint64_t replication_seed(const SimConfig& config, int index);

/// Replications run under OpenMP; averaging walks the fixed index order.
ReplicatedOutcome run_replicated(const Schedule& schedule, const GateMap& gate_of,
                                 const SimConfig& config, bool keep_records = false);

/// Single-threaded reference for run_replicated.
ReplicatedOutcome run_replicated_serial(const Schedule& schedule, const GateMap& gate_of,
                                        const SimConfig& config, bool keep_records = false);

struct SweepRow {
  int n_star = 0;
  double mean_hold_all = 0;
  double mean_taxi = 0;
  double held_departures = 0;
  double conflicts = 0;
  [[nodiscard]] double total() const { return mean_hold_all + mean_taxi; }
};

struct Sweep {
  std::vector<SweepRow> rows;
  /// Holding off.
  SweepRow baseline;
};

Sweep sweep_n_star(const Schedule& schedule, const GateMap& gate_of, const SimConfig& config,
                   int n_star_lo, int n_star_hi);

/// Conflicts from actual times alone: consecutive flights at a gate where the
/// later one's actual gate-in is at or before the earlier one's actual
/// gate-out (within a minute, arrivals come first).
std::size_t count_conflicts_static(const Schedule& schedule, const GateMap& gate_of,
                                   Minute tow_dwell = kDefaultTowDwell);

/// Push-back/take-off events of an outcome, for calibration.
std::vector<SurfaceEvent> surface_events(const SimOutcome& outcome);

}  // namespace gatehold
