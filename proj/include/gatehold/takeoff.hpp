#pragma once

#include "gatehold/random.hpp"

#include <cstdint>

namespace gatehold {

/// Three-point runway service model: the take-off rate in a minute is c1, c2
/// or c3 aircraft/minute with probabilities p1, p2 and 1 - p1 - p2.
struct TakeoffParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  [[nodiscard]] double p3() const { return 1.0 - p1 - p2; }
  /// Throws gatehold::Error unless rates are non-negative and p1, p2, p3 form
  /// a probability vector.
  void validate() const;

  friend bool operator==(const TakeoffParams&, const TakeoffParams&) = default;
};

/// Published LGA runway-13 parameters.
inline constexpr TakeoffParams kLgaTakeoffParams{0.525, 1.025, 0.025, 0.3733, 0.38};

/// Mean take-off rate (aircraft/minute).
double takeoff_mean(const TakeoffParams& p);

/// Standard deviation of the rate averaged over `window` minutes.
double takeoff_sigma(const TakeoffParams& p, int window = 10);

/// Runtime runway server. Each minute with a non-empty queue it draws a rate,
/// adds it to the fractional clearance carry and releases floor(carry)
/// aircraft (at most the queue length). An empty queue freezes the carry.
class RunwayProcess {
 public:
  RunwayProcess(const TakeoffParams& params, std::uint64_t seed);

  /// Aircraft cleared for take-off this minute.
  int step(int queue_len);
  /// Same as step() but with the rate supplied instead of drawn.
  int step_with_rate(int queue_len, double rate);
  /// Draws one rate from {c1, c2, c3}.
  double draw_rate();

  [[nodiscard]] double carry() const { return carry_; }
  void set_carry(double carry) { carry_ = carry; }
  [[nodiscard]] const TakeoffParams& params() const { return params_; }

 private:
  TakeoffParams params_;
  double carry_ = 0.0;
  Rng rng_;
};

}  // namespace gatehold
