#include "geolin/spatial.hpp"

#include <cmath>

namespace geolin {

namespace {

constexpr double kSmallAngle = 1e-8;
constexpr double kLogBranchMargin = 1e-6;

// Rotation part of the exponential (Rodrigues formula).
Mat3 so3_exp(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 wx = skew(w);
  if (theta < kSmallAngle) {
    return Mat3::Identity() + wx + 0.5 * (wx * wx);
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + a * wx + b * (wx * wx);
}

// Left Jacobian of SO(3), coupling translation into the SE(3) exponential.
Mat3 so3_left_jacobian(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 wx = skew(w);
  if (theta < kSmallAngle) {
    return Mat3::Identity() + 0.5 * wx + (wx * wx) / 6.0;
  }
  const double t2 = theta * theta;
  const double b = (1.0 - std::cos(theta)) / t2;
  const double c = (theta - std::sin(theta)) / (t2 * theta);
  return Mat3::Identity() + b * wx + c * (wx * wx);
}

Mat3 so3_left_jacobian_inverse(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 wx = skew(w);
  if (theta < kSmallAngle) {
    return Mat3::Identity() - 0.5 * wx + (wx * wx) / 12.0;
  }
  const double t2 = theta * theta;
  const double c = 1.0 / t2 - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  return Mat3::Identity() - 0.5 * wx + c * (wx * wx);
}

Vec3 so3_log(const Mat3& r) {
  const double cos_theta = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  if (theta >= M_PI - kLogBranchMargin) {
    throw std::domain_error("se3_log: rotation angle within 1e-6 of pi, principal branch is ambiguous");
  }
  if (theta < kSmallAngle) {
    // log(R) ~ (R - R^T)/2 up to O(theta^3)
    return unskew(0.5 * (r - r.transpose()));
  }
  return theta / (2.0 * std::sin(theta)) * unskew(r - r.transpose());
}

}  // namespace

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
      -w.y(), w.x(), 0.0;
  return m;
}

Vec3 unskew(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

Pose se3_exp(const Vec6& xi) {
  const Vec3 rho = xi.head<3>();
  const Vec3 w = xi.tail<3>();
  return {so3_exp(w), so3_left_jacobian(w) * rho};
}

Vec6 se3_log(const Pose& p) {
  const Vec3 w = so3_log(p.rotation);
  Vec6 xi;
  xi << so3_left_jacobian_inverse(w) * p.origin, w;
  return xi;
}

Mat6 velocity_transform(const Pose& p) {
  Mat6 x = Mat6::Zero();
  x.topLeftCorner<3, 3>() = p.rotation;
  x.topRightCorner<3, 3>() = skew(p.origin) * p.rotation;
  x.bottomRightCorner<3, 3>() = p.rotation;
  return x;
}

Mat6 wrench_transform(const Pose& p) {
  Mat6 x = Mat6::Zero();
  x.topLeftCorner<3, 3>() = p.rotation;
  x.bottomLeftCorner<3, 3>() = skew(p.origin) * p.rotation;
  x.bottomRightCorner<3, 3>() = p.rotation;
  return x;
}

Mat6 cross_motion(const Vec6& v) {
  const Mat3 ux = skew(v.head<3>());
  const Mat3 wx = skew(v.tail<3>());
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = wx;
  m.topRightCorner<3, 3>() = ux;
  m.bottomRightCorner<3, 3>() = wx;
  return m;
}

Mat6 cross_force(const Vec6& v) { return -cross_motion(v).transpose(); }

Mat6 cross_force_jacobian(const Vec6& f) {
  const Mat3 fx = skew(f.head<3>());
  const Mat3 mx = skew(f.tail<3>());
  Mat6 n = Mat6::Zero();
  n.topRightCorner<3, 3>() = -fx;
  n.bottomLeftCorner<3, 3>() = -fx;
  n.bottomRightCorner<3, 3>() = -mx;
  return n;
}

}  // namespace geolin
