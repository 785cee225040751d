#pragma once

#include "gatehold/generator.hpp"
#include "gatehold/schedule.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gatehold {

/// A flight as the assignment problem sees it: a scheduled gate window plus
/// the attributes that decide gate compatibility.
struct Slot {
  std::string flight;
  Minute t_in = 0;
  Minute t_out = 0;
};

/// Robust gate assignment instance: minimise the summed expected overlap
/// A * B^sep over every pair of flights sharing a gate, subject to one gate
/// per flight, compatibility, and at least t_buff minutes between any two
/// flights at the same gate.
class ProblemInstance {
 public:
  ProblemInstance(std::vector<Slot> slots, std::vector<Gate> gates,
                  std::vector<std::vector<char>> compatible, Minute t_buff, double A, double B);

  /// Windows from scheduled times; compatibility from gate airline and
  /// equipment sets. Throws if a flight has no compatible gate.
  static ProblemInstance from_schedule(const Schedule& s, Minute t_buff, double A, double B,
                                       Minute dwell = kDefaultTowDwell);

  [[nodiscard]] std::size_t flights() const { return slots_.size(); }
  [[nodiscard]] std::size_t gates() const { return gates_.size(); }
  [[nodiscard]] const Slot& slot(std::size_t f) const { return slots_[f]; }
  [[nodiscard]] const Gate& gate(std::size_t g) const { return gates_[g]; }
  [[nodiscard]] bool compatible(std::size_t f, std::size_t g) const { return compatible_[f][g] != 0; }
  [[nodiscard]] Minute t_buff() const { return t_buff_; }
  [[nodiscard]] double A() const { return A_; }
  [[nodiscard]] double B() const { return B_; }

  /// Gate separation: later t_in minus earlier t_out (negative if they overlap).
  [[nodiscard]] Minute separation(std::size_t i, std::size_t k) const;
  /// Whether i and k may share a gate: the product condition
  /// (t_out_i - t_in_k + t_buff)(t_out_k - t_in_i + t_buff) <= 0.
  [[nodiscard]] bool separable(std::size_t i, std::size_t k) const;
  /// A * B^sep(i, k).
  [[nodiscard]] double pair_cost(std::size_t i, std::size_t k) const;

  [[nodiscard]] std::optional<std::size_t> flight_index(const std::string& id) const;
  [[nodiscard]] std::optional<std::size_t> gate_index(const std::string& id) const;

 private:
  std::vector<Slot> slots_;
  std::vector<Gate> gates_;
  std::vector<std::vector<char>> compatible_;
  Minute t_buff_;
  double A_;
  double B_;
  Minute origin_ = 0;
  std::vector<double> power_;  // B^k for k = 0..span
};

/// Gate index per flight.
using Assignment = std::vector<std::size_t>;

inline constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

struct Violation {
  enum class Kind { unassigned, incompatible, too_close };
  Kind kind;
  std::string flight;
  std::string other;  // second flight for too_close
  std::string gate;
};

/// Empty when the assignment covers every flight with a compatible gate and
/// respects the separation buffer.
std::vector<Violation> check_feasible(const ProblemInstance& inst, const Assignment& a);

/// Total expected overlap. Throws on an infeasible assignment.
double objective(const ProblemInstance& inst, const Assignment& a);

/// Objective without the feasibility check (pairs that overlap still
/// contribute A * B^sep with a negative sep).
double objective_unchecked(const ProblemInstance& inst, const Assignment& a);

/// Flights per gate in t_in order; maintained incrementally by the solver.
class GatePlan {
 public:
  GatePlan(const ProblemInstance& inst, const Assignment& a);

  [[nodiscard]] const Assignment& assignment() const { return assign_; }
  [[nodiscard]] const std::vector<std::size_t>& at(std::size_t gate) const { return by_gate_[gate]; }
  [[nodiscard]] std::size_t gate_of(std::size_t flight) const { return assign_[flight]; }

  void move(std::size_t flight, std::size_t gate);

 private:
  const ProblemInstance* inst_;
  Assignment assign_;
  std::vector<std::vector<std::size_t>> by_gate_;
};

struct MoveEval {
  bool feasible = false;
  double delta = 0.0;
};

/// Insert move: reassign one flight to `target`. The delta subtracts the
/// flight's pair terms at its old gate and adds them at the target.
MoveEval evaluate_insert(const ProblemInstance& inst, const GatePlan& plan, std::size_t flight,
                         std::size_t target);

struct IntervalExchange {
  std::size_t gate_a = 0;
  std::size_t gate_b = 0;
  Minute from = 0;
  Minute to = 0;
  std::vector<std::size_t> group_a;  // flights on gate_a intersecting [from, to]
  std::vector<std::size_t> group_b;
};

/// Collects the two groups of an interval exchange.
IntervalExchange make_exchange(const ProblemInstance& inst, const GatePlan& plan,
                               std::size_t gate_a, std::size_t gate_b, Minute from, Minute to);

/// Interval exchange move: the two groups trade gates. Pairs inside a group
/// keep their gate-mate, so only cross terms with the rest of each gate change.
MoveEval evaluate_exchange(const ProblemInstance& inst, const GatePlan& plan,
                           const IntervalExchange& ex);

void apply_exchange(GatePlan& plan, const IntervalExchange& ex);

/// Exhaustive optimum. Throws when gates^flights exceeds 1e7 or nothing is
/// feasible.
Assignment brute_force(const ProblemInstance& inst);

/// Scheduled separations between consecutive flights at each gate.
SeparationStats separation_stats(const ProblemInstance& inst, const Assignment& a);

/// Maps an assignment to (flight id -> gate id) and back.
GateMap to_gate_map(const ProblemInstance& inst, const Assignment& a);
Assignment from_gate_map(const ProblemInstance& inst, const GateMap& m);

}  // namespace gatehold
