#include "gatehold/takeoff.hpp"
#include "gatehold/error.hpp"

#include <algorithm>
#include <cmath>

namespace gatehold {

void TakeoffParams::validate() const {
  constexpr double eps = 1e-9;
  if (c1 < 0 || c2 < 0 || c3 < 0) throw Error("take-off rates must be non-negative");
  if (p1 < -eps || p2 < -eps || p3() < -eps) throw Error("take-off probabilities out of range");
}

double takeoff_mean(const TakeoffParams& p) {
  return p.c1 * p.p1 + p.c2 * p.p2 + p.c3 * p.p3();
}

double takeoff_sigma(const TakeoffParams& p, int window) {
  const double mu = takeoff_mean(p);
  const double second = p.c1 * p.c1 * p.p1 + p.c2 * p.c2 * p.p2 + p.c3 * p.c3 * p.p3();
  return std::sqrt(std::max(0.0, second - mu * mu) / window);
}

RunwayProcess::RunwayProcess(const TakeoffParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {
  params_.validate();
}

double RunwayProcess::draw_rate() {
  const double u = rng_.uniform();
  if (u < params_.p1) return params_.c1;
  if (u < params_.p1 + params_.p2) return params_.c2;
  return params_.c3;
}

int RunwayProcess::step(int queue_len) {
  if (queue_len <= 0) return 0;
  return step_with_rate(queue_len, draw_rate());
}

int RunwayProcess::step_with_rate(int queue_len, double rate) {
  if (queue_len <= 0) return 0;
  carry_ += rate;
  // The epsilon absorbs representation error in sums of decimal rates such
  // as 0.025 so that exact integers are not floored one short.
  const int available = static_cast<int>(std::floor(carry_ + 1e-9));
  const int cleared = std::min(available, queue_len);
  carry_ = std::max(0.0, carry_ - cleared);
  return cleared;
}

}  // namespace gatehold
