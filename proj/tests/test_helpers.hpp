#pragma once

#include "geolin/rng.hpp"
#include "geolin/spatial.hpp"

namespace geolin::testing {

// Uniform on [-1, 1].
inline double centered(Rng& rng) { return 2.0 * rng.uniform() - 1.0; }

inline Vec3 centered_vec3(Rng& rng) { return Vec3(centered(rng), centered(rng), centered(rng)); }

inline Vec6 centered_vec6(Rng& rng) {
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = centered(rng);
  return v;
}

// Random pose with rotation angle bounded away from pi.
inline Pose random_pose(Rng& rng) { return se3_exp(centered_vec6(rng)); }

inline double max_abs_diff(const MatX& a, const MatX& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace geolin::testing
