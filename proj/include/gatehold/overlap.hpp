#pragma once

#include "gatehold/schedule.hpp"

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace gatehold {

/// Probability mass on integer minutes lo, lo+1, ..., lo+mass.size()-1.
struct EmpiricalDistribution {
  int lo = -60;
  std::vector<double> mass;

  [[nodiscard]] int hi() const { return lo + static_cast<int>(mass.size()) - 1; }

  /// Histogram of samples on [lo, hi]; samples outside are clamped to the
  /// edges. Throws when `samples` is empty.
  static EmpiricalDistribution from_samples(std::span<const double> samples, int lo = -60,
                                            int hi = 240);
  static EmpiricalDistribution point_mass(int value);
  /// Weights per minute (not necessarily normalised) starting at `lo`.
  static EmpiricalDistribution from_weights(int lo, std::vector<double> weights);
};

struct DelayDistributions {
  EmpiricalDistribution departure;
  EmpiricalDistribution arrival;
};

/// Signed departure and arrival delays (actual - scheduled) of every leg
/// that has both times.
DelayDistributions delays_from_schedule(const Schedule& s, int lo = -60, int hi = 240);

/// Overlap of a departure scheduled at 0 with an arrival scheduled at `sep`.
struct OverlapValue {
  /// P(act_dep > act_arr)
  double probability = 0.0;
  /// E[act_dep - act_arr | act_dep > act_arr]
  double conditional = 0.0;
  /// E[(act_dep - act_arr)+] = probability * conditional
  double unconditional = 0.0;
};

/// Distribution of departure delay minus arrival delay.
EmpiricalDistribution delay_difference(const DelayDistributions& d);

OverlapValue overlap_at(const EmpiricalDistribution& difference, int sep);

/// Expected overlap (probability-weighted) for separation `sep` >= 0.
double expected_overlap(const DelayDistributions& d, int sep);

struct OverlapRow {
  int sep = 0;
  OverlapValue value;
};

/// Overlap table for sep = 0..max_sep, evaluated under OpenMP.
std::vector<OverlapRow> overlap_table(const DelayDistributions& d, int max_sep = 240);
/// Single-threaded reference for overlap_table.
std::vector<OverlapRow> overlap_table_serial(const DelayDistributions& d, int max_sep = 240);

struct ExponentialFit {
  double A = 0.0;
  double B = 1.0;
  /// Root-mean-square residual of the log-linear regression.
  double rms_log_residual = 0.0;
  std::size_t points = 0;
};

/// Least squares on log(overlap) = log A + sep * log B, ignoring
/// non-positive overlaps. Needs at least three distinct separations with
/// positive overlap.
ExponentialFit fit_exponential(std::span<const std::pair<double, double>> table);

/// Expected overlap as a function of gate separation: A * B^sep.
struct DisturbanceModel {
  double A = 8.0;
  double B = 0.97;
  std::vector<OverlapRow> table;

  [[nodiscard]] double operator()(double sep) const;
};

/// Fits the disturbance model to the unconditional overlap table.
DisturbanceModel fit_disturbance(const DelayDistributions& d, int max_sep = 240);

}  // namespace gatehold
