#pragma once

#include <cstdint>
#include <random>

#include "geolin/types.hpp"

namespace geolin {

/// Deterministic uniform sampler. mt19937_64 output is bit-exact per the
/// standard, and the bit-to-double conversion below avoids the
/// implementation-defined std::uniform_real_distribution, so streams are
/// reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Vec3 uniform_vec3() { return Vec3(uniform(), uniform(), uniform()); }

  Vec6 uniform_vec6() {
    Vec6 v;
    for (int i = 0; i < 6; ++i) v[i] = uniform();
    return v;
  }

  VecX uniform_vecx(Eigen::Index n) {
    VecX v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; mixes (master seed, trial index) into a sub-seed so
/// the trial stream is stable under changes of the trial count.
inline std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace geolin
