#pragma once

#include "geolin/dynamics.hpp"
#include "geolin/types.hpp"

namespace geolin {

/// The four partial derivatives of the extended inverse dynamics at one
/// evaluation point, each stacked [base rows; joint rows] to match the
/// extended torque ordering. dH and dv are n x 6, ds and dr are n x n_joints,
/// with n = 6 + n_joints. The H block is the left-trivialized derivative
/// (right perturbation of the base pose), the others are plain partials.
struct IdJacobians {
  MatX dH;
  MatX ds;
  MatX dv;
  MatX dr;
};

/// Left-trivialized derivative of the map H -> velocity_transform(H^{-1}) * w
/// for a fixed world-frame 6-vector w. rotation_0A is the transpose of the
/// base rotation, origin_A0 the base origin.
Mat6 dXv_dH(const Mat3& rotation_0A, const Vec3& origin_A0, const Vec6& w_A);

/// Left-trivialized derivative of the extended inverse dynamics with respect
/// to the base pose, from a populated workspace.
MatX did_dH(const MultibodyModel& model, const DynamicsWorkspace& ws);

/// Derivative with respect to the joint positions. base_acc and joint_acc are
/// the accelerations the workspace was evaluated at; they are treated as
/// constants (independent inputs of the extended system).
MatX did_ds(const MultibodyModel& model, const DynamicsWorkspace& ws, const MotionVector& base_acc,
            const VecX& joint_acc);

/// Derivative with respect to the base twist, taken in the base body frame
/// (a perturbation added to the frame-0 twist).
MatX did_dv(const MultibodyModel& model, const DynamicsWorkspace& ws);

/// Derivative with respect to the joint velocities.
MatX did_dr(const MultibodyModel& model, const DynamicsWorkspace& ws);

/// All four derivative sweeps over one workspace.
IdJacobians id_jacobians(const MultibodyModel& model, const DynamicsWorkspace& ws);

}  // namespace geolin
