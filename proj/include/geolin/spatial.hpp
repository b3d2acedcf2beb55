#pragma once

#include <stdexcept>

#include "geolin/types.hpp"

namespace geolin {

/// 6D twist, ordered linear-first: [linear; angular].
struct MotionVector {
  Vec3 linear{Vec3::Zero()};
  Vec3 angular{Vec3::Zero()};

  Vec6 vector() const {
    Vec6 out;
    out << linear, angular;
    return out;
  }

  static MotionVector FromVector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }
};

/// 6D wrench, ordered [force; moment], dual to MotionVector under the
/// power pairing <f, v> = force.dot(linear) + moment.dot(angular).
struct ForceVector {
  Vec3 force{Vec3::Zero()};
  Vec3 moment{Vec3::Zero()};

  Vec6 vector() const {
    Vec6 out;
    out << force, moment;
    return out;
  }

  static ForceVector FromVector(const Vec6& f) { return {f.head<3>(), f.tail<3>()}; }
};

/// Rigid transform stored as a (rotation, origin) pair. The 4x4 homogeneous
/// matrix is a conversion view, not the storage format.
struct Pose {
  Mat3 rotation{Mat3::Identity()};
  Vec3 origin{Vec3::Zero()};

  static Pose Identity() { return {}; }

  Pose inverse() const { return {rotation.transpose(), -(rotation.transpose() * origin)}; }

  Pose operator*(const Pose& other) const {
    return {rotation * other.rotation, origin + rotation * other.origin};
  }

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d h = Eigen::Matrix4d::Identity();
    h.topLeftCorner<3, 3>() = rotation;
    h.topRightCorner<3, 1>() = origin;
    return h;
  }

  /// ||R^T R - I||, used by the orthogonality invariant checks.
  double orthogonality_error() const {
    return (rotation.transpose() * rotation - Mat3::Identity()).norm();
  }
};

/// 6x6 symmetric spatial inertia acting on twists: momentum = M * v.
using SpatialInertia = Mat6;

Mat3 skew(const Vec3& w);
Vec3 unskew(const Mat3& m);

/// Exponential map of SE(3). xi = [linear; angular]; exp(0) is the identity
/// and a pure rotation reduces to the Rodrigues formula.
Pose se3_exp(const Vec6& xi);

/// Logarithm map of SE(3) on the principal branch.
/// Throws std::domain_error when the rotation angle is within 1e-6 of pi,
/// where the branch is ambiguous.
Vec6 se3_log(const Pose& p);

/// Velocity (twist) coordinate transform built from a pose:
/// X = [[R, skew(o) R], [0, R]]. Maps twists expressed in the pose's child
/// frame to the parent frame.
Mat6 velocity_transform(const Pose& p);

/// Wrench coordinate transform, the power-dual of velocity_transform:
/// wrench_transform(H) == velocity_transform(H.inverse()).transpose().
Mat6 wrench_transform(const Pose& p);

/// 6D twist cross product v x: [[skew(w), skew(u)], [0, skew(w)]] for
/// v = [u; w]. This is the Lie bracket matrix of R^6_x.
Mat6 cross_motion(const Vec6& v);
inline Mat6 cross_motion(const MotionVector& v) { return cross_motion(v.vector()); }

/// Dual (twist-on-wrench) cross product, cross_force(v) == -cross_motion(v)^T.
Mat6 cross_force(const Vec6& v);
inline Mat6 cross_force(const MotionVector& v) { return cross_force(v.vector()); }

/// Jacobian of the map v -> cross_force(v) * f for a fixed wrench f, i.e. the
/// matrix N with N * v == cross_force(v) * f for all v. Used to differentiate
/// bias-wrench terms columnwise.
Mat6 cross_force_jacobian(const Vec6& f);

}  // namespace geolin
