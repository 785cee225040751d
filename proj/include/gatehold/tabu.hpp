#pragma once

#include "gatehold/assignment.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gatehold {

struct TabuOptions {
  /// Iterations a reversed move stays forbidden. Clamped to a quarter of the
  /// insert neighbourhood on small instances so the search cannot lock up.
  std::size_t tenure = 20;
  /// Iteration budget.
  std::size_t budget = 1000;
  /// Stop after this many iterations without improving the best.
  std::size_t stall_limit = 500;
  /// Random interval-exchange windows sampled per iteration.
  std::size_t exchange_samples = 50;
  std::uint64_t seed = 1;
};

struct TabuResult {
  Assignment best;
  double best_objective = 0.0;
  double initial_objective = 0.0;
  /// Best objective after each iteration.
  std::vector<double> trace;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

/// Greedy construction: flights in gate-in order, each to the compatible
/// gate with the largest gap since its last flight (empty gates first, ties
/// by gate id). Empty when some flight finds no feasible gate.
std::optional<Assignment> greedy_initial(const ProblemInstance& inst);

/// Greedy construction, falling back to `fallback` when it is feasible.
/// Throws when neither yields a feasible start.
Assignment initial_assignment(const ProblemInstance& inst,
                              const std::optional<Assignment>& fallback = std::nullopt);

/// Tabu search with Insert and Interval Exchange moves. Deterministic for a
/// given seed; the returned best never exceeds the initial objective.
TabuResult tabu_search(const ProblemInstance& inst, const Assignment& initial,
                       const TabuOptions& options);

/// Independent restarts (one per seed) run under OpenMP; the result with the
/// lowest (objective, seed) wins.
TabuResult tabu_search_restarts(const ProblemInstance& inst, const Assignment& initial,
                                const TabuOptions& options, std::span<const std::uint64_t> seeds);

/// Single-threaded reference for tabu_search_restarts.
TabuResult tabu_search_restarts_serial(const ProblemInstance& inst, const Assignment& initial,
                                       const TabuOptions& options,
                                       std::span<const std::uint64_t> seeds);

}  // namespace gatehold
