#pragma once

#include "geolin/derivatives.hpp"
#include "geolin/dynamics.hpp"

namespace geolin {

/// Left-trivialized linearization of the moving-base dynamics. With
/// n = 6 + n_joints, A is (2n)x(2n) and B is (2n)x(n_joints); rows and
/// columns are ordered [z_H(6); z_s(nJ); z_v(6); z_r(nJ)].
struct LinearizationMatrices {
  MatX A;
  MatX B;
};

/// Input matrix B = [0; 0; M^{-1} S]: the top 6 + n_joints rows vanish and
/// the bottom block is the last n_joints columns of the inverse mass matrix.
MatX input_matrix(const MultibodyModel& model, const VecX& joint_pos);

/// State matrix A assembled from the inverse-dynamics derivative sweeps and
/// one inverse-mass-matrix evaluation. (base_acc, joint_acc) must be the true
/// accelerations at the linearization point.
MatX state_matrix(const MultibodyModel& model, const SystemState& state,
                  const MotionVector& base_acc, const VecX& joint_acc,
                  const MotionVector& gravity = default_gravity());

/// Full linearization about (state, tau): recomputes the point accelerations
/// through the forward dynamics (so the base wrench is zero by construction),
/// then assembles A and B with a single inverse-mass-matrix evaluation.
LinearizationMatrices linearize(const MultibodyModel& model, const SystemState& state,
                                const VecX& tau, const MotionVector& gravity = default_gravity());

}  // namespace geolin
