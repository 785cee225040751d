#pragma once

#include "gatehold/schedule.hpp"
#include "gatehold/takeoff.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gatehold {

/// Push-back and take-off of one departure, as recorded by surveillance data
/// or emitted by the simulator.
struct SurfaceEvent {
  std::string flight_id;
  Minute pushback = 0;
  Minute takeoff = 0;
  std::string terminal;
};

std::vector<SurfaceEvent> load_events(const std::filesystem::path& path);
void save_events(const std::filesystem::path& path, const std::vector<SurfaceEvent>& events);

/// Minute-grid series starting at `start`: n[i] aircraft taxiing out at
/// minute start+i and rate[i] the mean take-offs per minute over
/// [start+i, start+i+9].
struct NTSeries {
  Minute start = 0;
  std::vector<int> n;
  std::vector<double> rate;
  /// Length of the take-off averaging window in minutes.
  int window = 10;
};

/// Builds N(t) and T(t) over [first push-back, last take-off].
/// Events must be sorted by push-back time.
NTSeries build_nt(std::span<const SurfaceEvent> events, int window = 10);

struct CorrelationPoint {
  int offset = 0;
  /// Pearson correlation of N(t) with T(t + offset); empty when undefined.
  std::optional<double> r;
};

struct CorrelationScan {
  std::vector<CorrelationPoint> points;
  /// Offset with the largest defined correlation (ties: smallest offset).
  std::optional<int> best_offset;
};

CorrelationScan correlation_scan(std::span<const int> n, std::span<const double> rate,
                                 int min_offset, int max_offset);

struct ThroughputEntry {
  int n = 0;
  double mean_rate = 0.0;
  double std_rate = 0.0;
  std::size_t samples = 0;
};

/// Mean and standard deviation of T(t) for each observed N(t), ascending N.
struct ThroughputCurve {
  std::vector<ThroughputEntry> entries;
};

ThroughputCurve build_throughput_curve(const NTSeries& series);

/// Leading contiguous run of entries starting at the smallest N with at
/// least `min_samples` samples each.
ThroughputCurve trim_curve(const ThroughputCurve& curve, std::size_t min_samples);

/// Smallest N at which the mean rate gains less than `slope_threshold`
/// aircraft/min per unit N over the next `window` entries. Throws when the
/// curve never flattens.
int detect_saturation(const ThroughputCurve& curve, double slope_threshold = 0.01,
                      int window = 3);

/// Summary of T(t) over minutes with N(t) in [n_lo, n_hi].
struct CapacitySample {
  double mean_rate = 0.0;
  double std_rate = 0.0;
  std::size_t samples = 0;
  /// Normalised histogram of take-offs per window (index = count).
  std::vector<double> window_counts;
};

CapacitySample capacity_sample(const NTSeries& series, int n_lo, int n_hi);

// Take-off parameter search -----------------------------------------------

/// Probabilities (p1, p2) matching mean `mu` and windowed deviation `sigma`
/// for rates c1, c2, c3. Empty when the system is singular or the solution is
/// not a probability vector.
std::optional<TakeoffParams> solve_probabilities(double c1, double c2, double c3, double mu,
                                                 double sigma, int window = 10);

/// Exact distribution of take-offs per `window` minutes under a saturated
/// queue, for rates that are multiples of `step`. The clearance carry is
/// uniform on the step lattice in steady state (every rate acts as a rotation
/// of the lattice), so the window count is floor((carry + sum of rates)).
std::vector<double> window_count_distribution(const TakeoffParams& p, double step = 0.025,
                                              int window = 10);

double total_variation(std::span<const double> a, std::span<const double> b);

struct TakeoffFitOptions {
  double step = 0.025;
  double c_max = 2.0;
  int window = 10;
};

struct TakeoffFit {
  TakeoffParams params;
  /// Total variation distance between the model and empirical histograms.
  double distance = 0.0;
  std::size_t feasible = 0;
};

/// Grid search over (c1, c2, c3) in [step, c_max]. Each triple gets the
/// (p1, p2) solving the mean/deviation equations; among feasible triples the
/// one whose window-count distribution is closest to `empirical` wins, ties
/// going to the lexicographically smallest (c1, c2, c3).
/// The outer loop runs under OpenMP with a deterministic reduction.
TakeoffFit fit_takeoff_params(double mu, double sigma, std::span<const double> empirical,
                              const TakeoffFitOptions& options = {});

/// Single-threaded reference for fit_takeoff_params.
TakeoffFit fit_takeoff_params_serial(double mu, double sigma, std::span<const double> empirical,
                                     const TakeoffFitOptions& options = {});

// Taxi-out ------------------------------------------------------------------

struct TaxiFit {
  std::string terminal;
  double mu_log = 0.0;
  double sigma_log = 0.0;
  std::size_t samples = 0;
};

inline constexpr double kSigmaLogFloor = 1e-6;
inline constexpr std::size_t kMinTaxiSamples = 30;

/// Maximum-likelihood lognormal fit of taxi-out minutes.
TaxiFit fit_taxi_lognormal(std::span<const double> minutes, std::string terminal = {});

/// Departures already taxiing when each event's aircraft pushes back (N_pb).
/// Same-minute push-backs earlier in the input count as ahead.
std::vector<int> pushback_congestion(std::span<const SurfaceEvent> events);

/// Lognormal fits per terminal from events whose N_pb is below `threshold`.
/// Terminals with too few unimpeded samples are skipped.
std::vector<TaxiFit> fit_taxi_by_terminal(std::span<const SurfaceEvent> events,
                                          int threshold = 3);

// Whole pipeline ------------------------------------------------------------

struct CalibrationOptions {
  double slope_threshold = 0.01;
  int slope_window = 3;
  std::size_t min_curve_samples = 30;
  /// Capacity window is [N*, N* + capacity_span].
  int capacity_span = 5;
  int npb_threshold = 3;
  int min_offset = -20;
  int max_offset = 20;
  TakeoffFitOptions fit;
};

struct CalibrationReport {
  NTSeries series;
  ThroughputCurve curve;
  CorrelationScan correlation;
  int n_star = 0;
  CapacitySample capacity;
  TakeoffFit takeoff;
  std::vector<TaxiFit> taxi;
  /// Mean and deviation of taxi-out minutes by N_pb.
  std::vector<ThroughputEntry> taxi_by_npb;
};

CalibrationReport calibrate(std::vector<SurfaceEvent> events,
                            const CalibrationOptions& options = {});

}  // namespace gatehold
