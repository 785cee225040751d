#pragma once

#include <cstdint>
#include <random>

namespace gatehold {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for stream `stream` of master seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded generator whose variates are bit-identical across platforms.
/// The std:: distributions are implementation-defined, so only the raw
/// mt19937_64 output is consumed and the transforms are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double normal();
  double lognormal(double mu_log, double sigma_log);

 private:
  std::mt19937_64 engine_;
};

}  // namespace gatehold
