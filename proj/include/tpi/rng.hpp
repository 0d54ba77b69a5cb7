#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace tpi {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-trial random stream: a SplitMix64 sequence whose starting state is a
/// hash of (seed, trial, stream). Draws for a trial depend only on these keys,
/// never on which worker runs it.
class TrialRng {
 public:
  using result_type = std::uint64_t;

  constexpr TrialRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0)
      : state_(mix64(seed ^ mix64(trial * 0x9e3779b97f4a7c15ULL + mix64(stream + 1)))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  constexpr double uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential variate with the given rate, by inversion.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  bool coin() { return ((*this)() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace tpi
