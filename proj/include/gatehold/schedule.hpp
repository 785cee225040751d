#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace gatehold {

/// Integer minutes since the Unix epoch (or since any fixed origin).
using Minute = std::int64_t;

enum class EquipmentClass { small, large };

std::string_view to_string(EquipmentClass c);
EquipmentClass parse_equipment(std::string_view s);

/// Gate-in/gate-out dwell of a towed aircraft (arrival-only or departure-only
/// leg) when the schedule carries only one of its two times.
inline constexpr Minute kDefaultTowDwell = 45;

/// One gate visit: a paired arrival+departure turn, or an unpaired leg.
struct Flight {
  std::string id;
  std::string airline;
  std::string terminal;
  EquipmentClass equipment = EquipmentClass::small;
  std::optional<Minute> sched_arr;
  std::optional<Minute> sched_dep;
  std::optional<Minute> act_arr;
  std::optional<Minute> act_dep;
  std::optional<std::string> current_gate;
  /// Leg ids merged into this turn by pair_flights (empty for raw legs).
  std::vector<std::string> legs;

  [[nodiscard]] bool has_arrival() const { return sched_arr.has_value(); }
  [[nodiscard]] bool has_departure() const { return sched_dep.has_value(); }
  [[nodiscard]] bool is_turn() const { return has_arrival() && has_departure(); }
  /// Ids of the source legs: `legs` when paired, otherwise the flight id.
  [[nodiscard]] std::vector<std::string> source_ids() const;
};

struct Gate {
  std::string id;
  std::string terminal;
  std::set<std::string> airlines;
  std::set<EquipmentClass> equipment;

  [[nodiscard]] bool accepts(const Flight& f) const {
    return airlines.contains(f.airline) && equipment.contains(f.equipment);
  }
};

struct Horizon {
  Minute start = 0;
  Minute end = 0;
};

struct Schedule {
  std::vector<Flight> flights;
  std::vector<Gate> gates;
  Horizon horizon;

  [[nodiscard]] const Gate* find_gate(std::string_view id) const;
};

/// Gate-in/gate-out window of one flight at one gate.
struct GateOccupancy {
  std::string flight;
  std::string gate;
  Minute t_in = 0;
  Minute t_out = 0;
};

/// Scheduled gate window. Arrival-only legs stay `dwell` minutes after the
/// arrival; departure-only legs are at the gate `dwell` minutes before.
GateOccupancy scheduled_window(const Flight& f, Minute dwell = kDefaultTowDwell);

/// Actual gate window from act_arr/act_dep with the same dwell convention.
/// Requires the actual times matching the flight's legs.
GateOccupancy actual_window(const Flight& f, Minute dwell = kDefaultTowDwell);

/// Throws gatehold::Error if the flight violates the time-ordering invariants.
void validate_flight(const Flight& f);

/// Parses integer minutes or an ISO-8601 "YYYY-MM-DD[THH:MM[:SS]]" timestamp.
Minute parse_time(std::string_view text);

// CSV I/O -------------------------------------------------------------------

Schedule read_schedule(std::istream& in);
Schedule load_schedule(const std::filesystem::path& path);
void write_schedule(std::ostream& out, const Schedule& s);
void save_schedule(const std::filesystem::path& path, const Schedule& s);

std::vector<Gate> read_gates(std::istream& in);
std::vector<Gate> load_gates(const std::filesystem::path& path);
void write_gates(std::ostream& out, const std::vector<Gate>& gates);
void save_gates(const std::filesystem::path& path, const std::vector<Gate>& gates);

/// flight_id -> gate_id
using GateMap = std::map<std::string, std::string>;
GateMap load_gate_map(const std::filesystem::path& path);
void save_gate_map(const std::filesystem::path& path, const GateMap& m);

/// Horizon spanning every time present in `flights`.
Horizon span_of(const std::vector<Flight>& flights);

// Pairing -------------------------------------------------------------------

/// Merges arrivals and departures into turns using their current gates.
/// At each gate the legs are replayed in time order; a departure pairs with
/// the arrival immediately before it when the equipment class matches and no
/// other arrival came in between (otherwise the aircraft was towed and both
/// legs are kept unpaired). Nested tows unwind from the innermost pair out.
/// Flights without a current gate stay unpaired. Output is sorted by the
/// scheduled gate-in time, then id.
std::vector<Flight> pair_flights(const std::vector<Flight>& arrivals,
                                 const std::vector<Flight>& departures);

/// Splits a schedule into arrival-only and departure-only legs and pairs them.
/// Flights that are already turns pass through unchanged.
Schedule pair_schedule(const Schedule& legs);

}  // namespace gatehold
