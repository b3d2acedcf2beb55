#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "geolin/model.hpp"
#include "geolin/spatial.hpp"
#include "geolin/types.hpp"

namespace geolin {

/// Default gravity vector in the world frame, [linear; angular].
inline MotionVector default_gravity() { return {Vec3(0.0, 0.0, -9.81), Vec3::Zero()}; }

/// Every intermediate of one extended-inverse-dynamics sweep, recorded so the
/// derivative sweeps can consume it read-only without recomputing kinematics.
/// Per-body arrays are indexed 0..n_bodies with index 0 the moving base;
/// joint-indexed entries at index 0 are unused placeholders.
struct DynamicsWorkspace {
  // Evaluation point.
  Pose base_pose;      // H
  VecX joint_pos;      // s
  Vec6 base_twist_A;   // base twist expressed in frame A
  VecX joint_vel;      // r
  Vec6 base_acc;       // base intrinsic acceleration expressed in frame 0
  VecX joint_acc;      // rdot
  Vec6 gravity_A;      // gravity expressed in frame A

  Mat6 X_base;                        // frame-0-from-frame-A velocity transform
  std::vector<Mat6> X_joint;          // child-from-predecessor-joint-frame transform
  std::vector<Mat6> X_parent;         // child-from-parent transform
  std::vector<Vec6> subspace;         // joint velocity subspaces
  std::vector<Vec6> v;                // body twists
  std::vector<Vec6> v_joint;          // joint twists
  std::vector<Vec6> a_rel;            // base-relative accelerations plus gravity
  std::vector<Vec6> a_vp;             // velocity-product accelerations
  std::vector<Vec6> a_base;           // base acceleration expressed in each body frame
  std::vector<Vec6> momentum;         // body momenta
  std::vector<Mat6> inertia_comp;     // composite rigid body inertias
  std::vector<Vec6> bias_comp;        // composite bias wrenches
  std::vector<Vec6> bias_vp;          // velocity-product bias wrenches
  MatX unit_wrenches;                 // 6 x n_joints, base-frame wrenches per unit joint acceleration

  int n_bodies() const { return static_cast<int>(v.size()) - 1; }
};

/// Output of the extended inverse dynamics: a fictitious 6D wrench on the
/// moving base plus the joint torques.
struct ExtendedTorque {
  ForceVector base_wrench;
  VecX joint_torques;

  /// Stacked [base_wrench; joint_torques], dimension 6 + n_joints.
  VecX stacked() const {
    VecX out(6 + joint_torques.size());
    out << base_wrench.vector(), joint_torques;
    return out;
  }
};

struct EidambResult {
  ExtendedTorque torque;
  DynamicsWorkspace workspace;
};

/// Extended inverse dynamics of a moving-base system. Inputs follow the
/// recursive-algorithm conventions: the base twist in the state is expressed
/// in the world frame, base_acc is the intrinsic base acceleration expressed
/// in frame 0, and gravity is expressed in the world frame. Arbitrary inputs
/// are allowed; they need not be dynamically consistent.
EidambResult eidamb(const MultibodyModel& model, const SystemState& state,
                    const MotionVector& base_acc, const VecX& joint_acc,
                    const MotionVector& gravity = default_gravity());

/// Base acceleration (frame 0) that makes the workspace's state inputs
/// consistent, i.e. re-running eidamb with it zeroes the base wrench.
/// Throws ModelError if the composite inertia of the base is singular.
MotionVector consistent_base_acceleration(const DynamicsWorkspace& workspace);

/// Generalized bias vector h = [h_base; h_joints]: the extended inverse
/// dynamics evaluated at zero accelerations.
VecX bias_vector(const MultibodyModel& model, const SystemState& state,
                 const MotionVector& gravity = default_gravity());

/// Dense mass matrix assembled column-by-column from unit-acceleration
/// inverse-dynamics sweeps. Independent of the base pose.
MatX mass_matrix(const MultibodyModel& model, const VecX& joint_pos);

/// Inverse of the mass matrix through the articulated-body recursion, without
/// forming the mass matrix. Throws ModelError on a singular articulated
/// inertia.
MatX immamb(const MultibodyModel& model, const VecX& joint_pos);

/// Number of immamb evaluations since process start; lets callers verify how
/// often the inverse mass matrix is recomputed.
std::uint64_t immamb_call_count();

struct Accelerations {
  MotionVector base;  // intrinsic base acceleration, frame 0
  VecX joints;
};

/// Forward dynamics composed from the inverse mass matrix and the bias
/// vector: nu_dot = M^{-1} (S tau - h).
Accelerations forward_dynamics(const MultibodyModel& model, const SystemState& state,
                               const VecX& tau, const MotionVector& gravity = default_gravity());

}  // namespace geolin
