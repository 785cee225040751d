#include "gatehold/tabu.hpp"
#include "gatehold/error.hpp"
#include "gatehold/parallel.hpp"
#include "gatehold/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

namespace gatehold {

std::optional<Assignment> greedy_initial(const ProblemInstance& inst) {
  std::vector<std::size_t> order(inst.flights());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(inst.slot(a).t_in, inst.slot(a).flight) <
           std::tie(inst.slot(b).t_in, inst.slot(b).flight);
  });
  Assignment a(inst.flights(), kUnassigned);
  std::vector<std::optional<Minute>> last_out(inst.gates());
  for (std::size_t f : order) {
    const Minute t_in = inst.slot(f).t_in;
    std::optional<std::size_t> pick;
    Minute pick_gap = 0;
    for (std::size_t g = 0; g < inst.gates(); ++g) {
      if (!inst.compatible(f, g)) continue;
      Minute gap = std::numeric_limits<Minute>::max();
      if (last_out[g]) {
        if (*last_out[g] + inst.t_buff() > t_in) continue;
        gap = t_in - *last_out[g];
      }
      if (!pick || gap > pick_gap || (gap == pick_gap && inst.gate(g).id < inst.gate(*pick).id)) {
        pick = g;
        pick_gap = gap;
      }
    }
    if (!pick) return std::nullopt;
    a[f] = *pick;
    last_out[*pick] = std::max(last_out[*pick].value_or(inst.slot(f).t_out), inst.slot(f).t_out);
  }
  return a;
}

Assignment initial_assignment(const ProblemInstance& inst, const std::optional<Assignment>& fallback) {
  if (auto g = greedy_initial(inst)) return *g;
  if (fallback && check_feasible(inst, *fallback).empty()) return *fallback;
  throw Error("no feasible initial assignment could be constructed");
}

namespace {

struct Choice {
  bool valid = false;
  double delta = 0.0;
  int kind = 0;  // 0 insert, 1 exchange
  std::size_t a = 0, b = 0;
  IntervalExchange exchange;

  [[nodiscard]] bool better_than(const Choice& o) const {
    if (!o.valid) return valid;
    return std::tie(delta, kind, a, b) < std::tie(o.delta, o.kind, o.a, o.b);
  }
};

}  // namespace

TabuResult tabu_search(const ProblemInstance& inst, const Assignment& initial,
                       const TabuOptions& options) {
  TabuResult res;
  res.seed = options.seed;
  res.best = initial;
  res.initial_objective = objective(inst, initial);
  res.best_objective = res.initial_objective;
  if (options.budget == 0 || inst.flights() == 0 || inst.gates() < 2) return res;

  std::size_t insert_moves = 0;
  for (std::size_t f = 0; f < inst.flights(); ++f)
    for (std::size_t g = 0; g < inst.gates(); ++g) insert_moves += inst.compatible(f, g) ? 1 : 0;
  insert_moves -= inst.flights();
  const std::size_t tenure = std::clamp<std::size_t>(insert_moves / 4, 1, std::max<std::size_t>(options.tenure, 1));

  GatePlan plan(inst, initial);
  double current = res.initial_objective;
  std::vector<std::vector<std::size_t>> tabu_until(inst.flights(),
                                                   std::vector<std::size_t>(inst.gates(), 0));
  Rng rng(options.seed);
  constexpr double eps = 1e-9;
  std::size_t stall = 0;

  for (std::size_t iter = 1; iter <= options.budget; ++iter) {
    Choice admissible, fallback;
    auto consider = [&](Choice c, bool is_tabu) {
      const bool aspires = current + c.delta < res.best_objective - eps;
      if (!is_tabu || aspires) {
        if (c.better_than(admissible)) admissible = std::move(c);
      } else if (c.better_than(fallback)) {
        fallback = std::move(c);
      }
    };

    for (std::size_t f = 0; f < inst.flights(); ++f) {
      for (std::size_t g = 0; g < inst.gates(); ++g) {
        const auto ev = evaluate_insert(inst, plan, f, g);
        if (!ev.feasible) continue;
        Choice c;
        c.valid = true;
        c.delta = ev.delta;
        c.kind = 0;
        c.a = f;
        c.b = g;
        consider(std::move(c), tabu_until[f][g] > iter);
      }
    }

    for (std::size_t s = 0; s < options.exchange_samples; ++s) {
      const auto last_gate = static_cast<std::int64_t>(inst.gates()) - 1;
      const auto ga = static_cast<std::size_t>(rng.uniform_int(0, last_gate));
      auto gb = static_cast<std::size_t>(rng.uniform_int(0, last_gate - 1));
      if (gb >= ga) ++gb;
      const auto& anchor_gate = plan.at(ga).empty() ? plan.at(gb) : plan.at(ga);
      if (anchor_gate.empty()) continue;
      const std::size_t anchor = anchor_gate[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(anchor_gate.size()) - 1))];
      const Minute from = inst.slot(anchor).t_in;
      const Minute to = inst.slot(anchor).t_out + rng.uniform_int(0, 180);
      auto ex = make_exchange(inst, plan, ga, gb, from, to);
      if (ex.group_a.empty() && ex.group_b.empty()) continue;
      const auto ev = evaluate_exchange(inst, plan, ex);
      if (!ev.feasible) continue;
      bool is_tabu = false;
      for (std::size_t f : ex.group_a) is_tabu = is_tabu || tabu_until[f][gb] > iter;
      for (std::size_t f : ex.group_b) is_tabu = is_tabu || tabu_until[f][ga] > iter;
      Choice c;
      c.valid = true;
      c.delta = ev.delta;
      c.kind = 1;
      c.a = s;
      c.b = 0;
      c.exchange = std::move(ex);
      consider(std::move(c), is_tabu);
    }

    // Every candidate tabu and none aspiring: take the best tabu move anyway.
    const Choice& pick = admissible.valid ? admissible : fallback;
    if (!pick.valid) {
      // Nothing feasible this round; exchanges are resampled next time.
      res.iterations = iter;
      res.trace.push_back(res.best_objective);
      if (++stall >= options.stall_limit) break;
      continue;
    }

    // A tenure drawn per move breaks the fixed-length cycles a constant
    // tenure falls into on small neighbourhoods.
    const std::size_t hold = iter + static_cast<std::size_t>(rng.uniform_int(
                                        static_cast<std::int64_t>((tenure + 1) / 2),
                                        static_cast<std::int64_t>(tenure + tenure / 2 + 1)));
    if (pick.kind == 0) {
      const std::size_t from = plan.gate_of(pick.a);
      plan.move(pick.a, pick.b);
      tabu_until[pick.a][from] = hold;
    } else {
      const auto& ex = pick.exchange;
      apply_exchange(plan, ex);
      for (std::size_t f : ex.group_a) tabu_until[f][ex.gate_a] = hold;
      for (std::size_t f : ex.group_b) tabu_until[f][ex.gate_b] = hold;
    }
    current += pick.delta;
    res.iterations = iter;

    if (current < res.best_objective - eps) {
      res.best = plan.assignment();
      res.best_objective = objective(inst, res.best);
      current = res.best_objective;
      stall = 0;
    } else {
      ++stall;
    }
    res.trace.push_back(res.best_objective);
    if (stall >= options.stall_limit || res.best_objective <= 0.0) break;
  }
  return res;
}

namespace {

bool better_result(const TabuResult& a, const TabuResult& b) {
  return std::tie(a.best_objective, a.seed) < std::tie(b.best_objective, b.seed);
}

}  // namespace

TabuResult tabu_search_restarts_serial(const ProblemInstance& inst, const Assignment& initial,
                                       const TabuOptions& options,
                                       std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw Error("tabu restarts need at least one seed");
  std::optional<TabuResult> best;
  for (auto seed : seeds) {
    auto opt = options;
    opt.seed = seed;
    auto r = tabu_search(inst, initial, opt);
    if (!best || better_result(r, *best)) best = std::move(r);
  }
  return *best;
}

TabuResult tabu_search_restarts(const ProblemInstance& inst, const Assignment& initial,
                                const TabuOptions& options, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw Error("tabu restarts need at least one seed");
  std::vector<TabuResult> results(seeds.size());
  const auto n = static_cast<long>(seeds.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
  for (long i = 0; i < n; ++i) {
    auto opt = options;
    opt.seed = seeds[static_cast<std::size_t>(i)];
    results[static_cast<std::size_t>(i)] = tabu_search(inst, initial, opt);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (better_result(results[i], results[best])) best = i;
  return std::move(results[best]);
}

}  // namespace gatehold
