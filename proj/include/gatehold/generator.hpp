#pragma once

#include "gatehold/random.hpp"
#include "gatehold/schedule.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gatehold {

/// shift + LogNormal(mu_log, sigma_log): a signed delay with a long late tail.
struct ShiftedLognormal {
  double shift = 0.0;
  double mu_log = 0.0;
  double sigma_log = 1.0;

  [[nodiscard]] double sample(Rng& rng) const { return shift + rng.lognormal(mu_log, sigma_log); }
  [[nodiscard]] double cdf(double x) const;
};

/// A traffic bank: separations shrink around `center` by a Gaussian bump.
struct Bank {
  Minute center = 0;
  Minute width = 60;
  double weight = 1.0;
};

struct TerminalLayout {
  std::string name;
  int gates = 1;
  /// The first `small_only_gates` gates of the terminal reject large aircraft.
  int small_only_gates = 0;
  std::vector<std::string> airlines;
};

struct GeneratorConfig {
  Horizon horizon{360, 1380};
  std::vector<TerminalLayout> terminals;
  /// Number of legs (arrivals plus departures) to keep; 0 fills the horizon.
  std::size_t flight_count = 0;
  double mean_separation = 94.0;
  /// Standard deviation over mean of the separation distribution.
  double separation_cv = 1.6;
  Minute min_separation = 5;
  double mean_occupancy = 55.0;
  double occupancy_cv = 0.3;
  Minute min_occupancy = 30;
  /// Shortest feasible actual turnaround; late inbounds push the outbound.
  Minute min_turnaround = 25;
  double large_fraction = 0.3;
  /// Probability that a turn hosts a towed aircraft (arr, arr, dep, dep).
  double tow_fraction = 0.02;
  std::vector<Bank> banks;
  ShiftedLognormal departure_delay{-20.0, 2.0, 1.2};
  ShiftedLognormal arrival_delay{-25.0, 2.8, 0.6};
  Minute delay_min = -60;
  Minute delay_max = 240;
};

/// Synthetic legs (arrival-only and departure-only flights) with their
/// current gates and gate list. Deterministic for a given seed.
/// Throws when `flight_count` exceeds what the gates can hold in the horizon.
Schedule gen_synthetic(const GeneratorConfig& config, std::uint64_t seed);

struct SeparationStats {
  std::size_t pairs = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

/// Scheduled gate separation between consecutive visits of each current
/// gate (population standard deviation).
SeparationStats current_separation_stats(const std::vector<Flight>& flights,
                                         Minute dwell = kDefaultTowDwell);

/// Mean scheduled occupancy (t_out - t_in) over paired turns.
double mean_turn_occupancy(const std::vector<Flight>& flights);

}  // namespace gatehold
