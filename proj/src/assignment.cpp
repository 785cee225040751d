#include "gatehold/assignment.hpp"
#include "gatehold/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace gatehold {

ProblemInstance::ProblemInstance(std::vector<Slot> slots, std::vector<Gate> gates,
                                 std::vector<std::vector<char>> compatible, Minute t_buff,
                                 double A, double B)
    : slots_(std::move(slots)),
      gates_(std::move(gates)),
      compatible_(std::move(compatible)),
      t_buff_(t_buff),
      A_(A),
      B_(B) {
  if (t_buff_ < 0) throw Error("t_buff must be non-negative");
  if (!(A_ >= 0) || !(B_ > 0) || B_ > 1) throw Error("disturbance needs A >= 0 and 0 < B <= 1");
  if (compatible_.size() != slots_.size()) throw Error("compatibility matrix size mismatch");
  for (std::size_t f = 0; f < slots_.size(); ++f) {
    if (compatible_[f].size() != gates_.size()) throw Error("compatibility matrix size mismatch");
    if (slots_[f].t_in >= slots_[f].t_out)
      throw Error("flight " + slots_[f].flight + ": gate-in must precede gate-out");
    if (std::none_of(compatible_[f].begin(), compatible_[f].end(), [](char c) { return c != 0; }))
      throw Error("flight " + slots_[f].flight + " has no compatible gate");
  }
  if (!slots_.empty()) {
    Minute lo = slots_[0].t_in, hi = slots_[0].t_out;
    for (const auto& s : slots_) {
      lo = std::min(lo, s.t_in);
      hi = std::max(hi, s.t_out);
    }
    origin_ = lo;
    power_.resize(static_cast<std::size_t>(hi - lo) + 1);
    for (std::size_t k = 0; k < power_.size(); ++k)
      power_[k] = std::pow(B_, static_cast<double>(k));
  }
}

ProblemInstance ProblemInstance::from_schedule(const Schedule& s, Minute t_buff, double A,
                                               double B, Minute dwell) {
  std::vector<Slot> slots;
  std::vector<std::vector<char>> compat;
  for (const auto& f : s.flights) {
    const auto w = scheduled_window(f, dwell);
    slots.push_back({f.id, w.t_in, w.t_out});
    std::vector<char> row(s.gates.size(), 0);
    for (std::size_t g = 0; g < s.gates.size(); ++g) row[g] = s.gates[g].accepts(f) ? 1 : 0;
    compat.push_back(std::move(row));
  }
  return ProblemInstance(std::move(slots), s.gates, std::move(compat), t_buff, A, B);
}

Minute ProblemInstance::separation(std::size_t i, std::size_t k) const {
  const auto& a = slots_[i];
  const auto& b = slots_[k];
  return a.t_in <= b.t_in ? b.t_in - a.t_out : a.t_in - b.t_out;
}

bool ProblemInstance::separable(std::size_t i, std::size_t k) const {
  const auto& a = slots_[i];
  const auto& b = slots_[k];
  return (a.t_out - b.t_in + t_buff_) * (b.t_out - a.t_in + t_buff_) <= 0;
}

double ProblemInstance::pair_cost(std::size_t i, std::size_t k) const {
  const Minute sep = separation(i, k);
  if (sep >= 0 && static_cast<std::size_t>(sep) < power_.size())
    return A_ * power_[static_cast<std::size_t>(sep)];
  return A_ * std::pow(B_, static_cast<double>(sep));
}

std::optional<std::size_t> ProblemInstance::flight_index(const std::string& id) const {
  for (std::size_t f = 0; f < slots_.size(); ++f)
    if (slots_[f].flight == id) return f;
  return std::nullopt;
}

std::optional<std::size_t> ProblemInstance::gate_index(const std::string& id) const {
  for (std::size_t g = 0; g < gates_.size(); ++g)
    if (gates_[g].id == id) return g;
  return std::nullopt;
}

namespace {

std::vector<std::vector<std::size_t>> group_by_gate(const ProblemInstance& inst,
                                                    const Assignment& a) {
  std::vector<std::vector<std::size_t>> by_gate(inst.gates());
  for (std::size_t f = 0; f < a.size(); ++f)
    if (a[f] < inst.gates()) by_gate[a[f]].push_back(f);
  for (auto& v : by_gate)
    std::sort(v.begin(), v.end(), [&](std::size_t x, std::size_t y) {
      return std::tie(inst.slot(x).t_in, x) < std::tie(inst.slot(y).t_in, y);
    });
  return by_gate;
}

}  // namespace

std::vector<Violation> check_feasible(const ProblemInstance& inst, const Assignment& a) {
  std::vector<Violation> out;
  for (std::size_t f = 0; f < inst.flights(); ++f) {
    if (f >= a.size() || a[f] >= inst.gates()) {
      out.push_back({Violation::Kind::unassigned, inst.slot(f).flight, {}, {}});
      continue;
    }
    if (!inst.compatible(f, a[f]))
      out.push_back({Violation::Kind::incompatible, inst.slot(f).flight, {}, inst.gate(a[f]).id});
  }
  const auto by_gate = group_by_gate(inst, a);
  for (std::size_t g = 0; g < by_gate.size(); ++g) {
    const auto& v = by_gate[g];
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t k = i + 1; k < v.size(); ++k)
        if (!inst.separable(v[i], v[k]))
          out.push_back({Violation::Kind::too_close, inst.slot(v[i]).flight,
                         inst.slot(v[k]).flight, inst.gate(g).id});
  }
  return out;
}

double objective_unchecked(const ProblemInstance& inst, const Assignment& a) {
  double total = 0.0;
  for (const auto& v : group_by_gate(inst, a))
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t k = i + 1; k < v.size(); ++k) total += inst.pair_cost(v[i], v[k]);
  return total;
}

double objective(const ProblemInstance& inst, const Assignment& a) {
  const auto violations = check_feasible(inst, a);
  if (!violations.empty())
    throw Error("objective of an infeasible assignment (" + std::to_string(violations.size()) +
                " violations, first at flight " + violations.front().flight + ")");
  return objective_unchecked(inst, a);
}

GatePlan::GatePlan(const ProblemInstance& inst, const Assignment& a)
    : inst_(&inst), assign_(a), by_gate_(group_by_gate(inst, a)) {
  if (assign_.size() != inst.flights()) throw Error("assignment size mismatch");
}

void GatePlan::move(std::size_t flight, std::size_t gate) {
  const std::size_t old = assign_[flight];
  if (old == gate) return;
  if (old < by_gate_.size()) {
    auto& v = by_gate_[old];
    v.erase(std::find(v.begin(), v.end(), flight));
  }
  auto& v = by_gate_[gate];
  const auto key = std::make_pair(inst_->slot(flight).t_in, flight);
  const auto pos = std::lower_bound(v.begin(), v.end(), key, [&](std::size_t x, const auto& k) {
    return std::make_pair(inst_->slot(x).t_in, x) < k;
  });
  v.insert(pos, flight);
  assign_[flight] = gate;
}

MoveEval evaluate_insert(const ProblemInstance& inst, const GatePlan& plan, std::size_t flight,
                         std::size_t target) {
  const std::size_t from = plan.gate_of(flight);
  if (target == from || !inst.compatible(flight, target)) return {};
  MoveEval ev;
  for (std::size_t other : plan.at(target))
    if (!inst.separable(flight, other)) return {};
  ev.feasible = true;
  for (std::size_t other : plan.at(target)) ev.delta += inst.pair_cost(flight, other);
  if (from < inst.gates())
    for (std::size_t other : plan.at(from))
      if (other != flight) ev.delta -= inst.pair_cost(flight, other);
  return ev;
}

IntervalExchange make_exchange(const ProblemInstance& inst, const GatePlan& plan,
                               std::size_t gate_a, std::size_t gate_b, Minute from, Minute to) {
  IntervalExchange ex{gate_a, gate_b, from, to, {}, {}};
  auto collect = [&](std::size_t g, std::vector<std::size_t>& out) {
    for (std::size_t f : plan.at(g))
      if (inst.slot(f).t_in <= to && inst.slot(f).t_out >= from) out.push_back(f);
  };
  collect(gate_a, ex.group_a);
  collect(gate_b, ex.group_b);
  return ex;
}

MoveEval evaluate_exchange(const ProblemInstance& inst, const GatePlan& plan,
                           const IntervalExchange& ex) {
  if (ex.gate_a == ex.gate_b) return {};
  auto in_group = [](const std::vector<std::size_t>& g, std::size_t f) {
    return std::find(g.begin(), g.end(), f) != g.end();
  };
  std::vector<std::size_t> rest_a, rest_b;
  for (std::size_t f : plan.at(ex.gate_a))
    if (!in_group(ex.group_a, f)) rest_a.push_back(f);
  for (std::size_t f : plan.at(ex.gate_b))
    if (!in_group(ex.group_b, f)) rest_b.push_back(f);

  for (std::size_t f : ex.group_a) {
    if (!inst.compatible(f, ex.gate_b)) return {};
    for (std::size_t r : rest_b)
      if (!inst.separable(f, r)) return {};
  }
  for (std::size_t f : ex.group_b) {
    if (!inst.compatible(f, ex.gate_a)) return {};
    for (std::size_t r : rest_a)
      if (!inst.separable(f, r)) return {};
  }
  MoveEval ev{true, 0.0};
  for (std::size_t f : ex.group_a) {
    for (std::size_t r : rest_b) ev.delta += inst.pair_cost(f, r);
    for (std::size_t r : rest_a) ev.delta -= inst.pair_cost(f, r);
  }
  for (std::size_t f : ex.group_b) {
    for (std::size_t r : rest_a) ev.delta += inst.pair_cost(f, r);
    for (std::size_t r : rest_b) ev.delta -= inst.pair_cost(f, r);
  }
  return ev;
}

void apply_exchange(GatePlan& plan, const IntervalExchange& ex) {
  for (std::size_t f : ex.group_a) plan.move(f, ex.gate_b);
  for (std::size_t f : ex.group_b) plan.move(f, ex.gate_a);
}

Assignment brute_force(const ProblemInstance& inst) {
  const std::size_t nf = inst.flights();
  const std::size_t ng = inst.gates();
  double space = 1.0;
  for (std::size_t i = 0; i < nf; ++i) space *= static_cast<double>(ng);
  if (space > 1e7) throw Error("brute_force: instance too large");

  Assignment current(nf, kUnassigned), best;
  double best_cost = 0.0;
  std::vector<std::vector<std::size_t>> at(ng);

  // Depth-first over flights; every feasible completion is visited.
  auto recurse = [&](auto&& self, std::size_t f, double cost) -> void {
    if (f == nf) {
      if (best.empty() || cost < best_cost) {
        best = current;
        best_cost = cost;
      }
      return;
    }
    for (std::size_t g = 0; g < ng; ++g) {
      if (!inst.compatible(f, g)) continue;
      bool ok = true;
      double added = 0.0;
      for (std::size_t o : at[g]) {
        if (!inst.separable(f, o)) {
          ok = false;
          break;
        }
        added += inst.pair_cost(f, o);
      }
      if (!ok) continue;
      current[f] = g;
      at[g].push_back(f);
      self(self, f + 1, cost + added);
      at[g].pop_back();
      current[f] = kUnassigned;
    }
  };
  recurse(recurse, 0, 0.0);
  if (best.empty() && nf > 0) throw Error("brute_force: no feasible assignment");
  return best;
}

SeparationStats separation_stats(const ProblemInstance& inst, const Assignment& a) {
  std::vector<double> seps;
  for (const auto& v : group_by_gate(inst, a))
    for (std::size_t i = 1; i < v.size(); ++i)
      seps.push_back(static_cast<double>(inst.slot(v[i]).t_in - inst.slot(v[i - 1]).t_out));
  SeparationStats st;
  st.pairs = seps.size();
  if (seps.empty()) return st;
  st.mean = std::accumulate(seps.begin(), seps.end(), 0.0) / static_cast<double>(seps.size());
  double ss = 0;
  for (double s : seps) ss += (s - st.mean) * (s - st.mean);
  st.stddev = std::sqrt(ss / static_cast<double>(seps.size()));
  return st;
}

GateMap to_gate_map(const ProblemInstance& inst, const Assignment& a) {
  GateMap m;
  for (std::size_t f = 0; f < inst.flights(); ++f)
    if (f < a.size() && a[f] < inst.gates()) m[inst.slot(f).flight] = inst.gate(a[f]).id;
  return m;
}

Assignment from_gate_map(const ProblemInstance& inst, const GateMap& m) {
  Assignment a(inst.flights(), kUnassigned);
  std::map<std::string, std::size_t> gate_ids;
  for (std::size_t g = 0; g < inst.gates(); ++g) gate_ids[inst.gate(g).id] = g;
  for (std::size_t f = 0; f < inst.flights(); ++f) {
    const auto it = m.find(inst.slot(f).flight);
    if (it == m.end()) continue;
    const auto g = gate_ids.find(it->second);
    if (g == gate_ids.end()) throw Error("assignment names unknown gate " + it->second);
    a[f] = g->second;
  }
  return a;
}

}  // namespace gatehold
