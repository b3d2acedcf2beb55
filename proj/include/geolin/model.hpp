#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geolin/spatial.hpp"
#include "geolin/types.hpp"

namespace geolin {

enum class JointKind { Revolute, Prismatic, Helical };

/// 1-DoF joint: rotation, translation, or screw motion about a unit axis.
/// pitch (m/rad) is only meaningful for helical joints.
struct JointType {
  JointKind kind = JointKind::Revolute;
  Vec3 axis = Vec3::UnitZ();
  double pitch = 0.1;
};

/// Kinematic tree. Bodies are numbered 0 (moving base) .. n_bodies with
/// parent(i) < i, so a forward sweep always visits parents first. Joint i
/// connects body i to its parent; n_joints == n_bodies.
struct MultibodyModel {
  int n_bodies = 0;
  std::vector<int> parent;             // parent[i-1] = lambda(i), i = 1..n_bodies
  std::vector<JointType> joints;       // joints[i-1] = joint i
  std::vector<Pose> fixed_transforms;  // fixed_transforms[i-1] = pose of frame lambda(i) in frame lambda(i)|i
  std::vector<SpatialInertia> inertias;  // inertias[i] = body i, index 0 = base

  int n_joints() const { return n_bodies; }
  int dof() const { return 6 + n_bodies; }

  int parent_of(int body) const { return parent[body - 1]; }
  const JointType& joint(int body) const { return joints[body - 1]; }
  const Pose& fixed_transform(int body) const { return fixed_transforms[body - 1]; }

  /// Throws ModelError if topology or inertia invariants are violated.
  void validate() const;
};

/// State of a moving-base system: base pose H, joint positions s, base twist
/// expressed in the world frame A, joint velocities r.
struct SystemState {
  Pose base_pose;
  VecX joint_pos;
  MotionVector base_twist;
  VecX joint_vel;
};

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse failure with the offending line (1-based) and field.
struct ParseError : std::runtime_error {
  ParseError(int line_number, const std::string& field, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ", " + field + ": " + message),
        line(line_number),
        field_name(field) {}
  int line;
  std::string field_name;
};

/// Joint kinematics: the configuration-dependent child-from-predecessor
/// velocity transform and the joint velocity subspace, with
/// v_joint = subspace * r_i.
struct JointKinematics {
  Mat6 transform;  // child frame from predecessor joint frame
  Vec6 subspace;
};

JointKinematics jcalc(const JointType& joint, double s);

/// Elementwise derivative of jcalc(joint, s).transform with respect to s.
Mat6 jcalc_deriv(const JointType& joint, double s);

/// Parse the line-oriented model document format (see README). Throws
/// ParseError on malformed input and ModelError on invariant violations.
MultibodyModel load_model(std::string_view text);
MultibodyModel load_model_file(const std::string& path);

/// Serialize a model in the same document format load_model reads.
std::string save_model(const MultibodyModel& model);

/// Deterministic 9-joint branched validation system: three revolute, three
/// prismatic, and three helical joints with axes covering x, y, z, one branch
/// at the base and one at a child link.
MultibodyModel build_test_system();

/// Random model with n_bodies joints: joint types/axes cycled, fixed
/// transforms drawn through the exponential map of uniform-[0,1) coordinates,
/// inertias symmetrized and resampled until positive definite.
MultibodyModel random_model(std::uint64_t seed, int n_bodies);

/// Random state with every coordinate uniform on [0,1); the base orientation
/// is generated through the exponential map.
SystemState random_state(std::uint64_t seed, const MultibodyModel& model);

}  // namespace geolin
