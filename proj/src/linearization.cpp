#include "geolin/linearization.hpp"

namespace geolin {

namespace {

// Rows [z_H; z_s] of A: dz_H = -v0 x z_H + z_v, dz_s = z_r, with v0 the base
// twist expressed in the body frame.
void fill_kinematic_rows(MatX& a, const Vec6& v0_body, int nj) {
  const int n = 6 + nj;
  a.topLeftCorner<6, 6>() = -cross_motion(v0_body);
  a.block(0, n, 6, 6) = Mat6::Identity();
  a.block(6, n + 6, nj, nj) = MatX::Identity(nj, nj);
}

MatX assemble_state_matrix(const MultibodyModel& model, const DynamicsWorkspace& ws,
                           const MatX& minv) {
  const int nj = model.n_joints();
  const int n = model.dof();
  const IdJacobians jac = id_jacobians(model, ws);

  MatX stacked(n, 2 * n);
  stacked << jac.dH, jac.ds, jac.dv, jac.dr;

  MatX a = MatX::Zero(2 * n, 2 * n);
  fill_kinematic_rows(a, ws.v[0], nj);
  a.bottomRows(n) = -minv * stacked;
  return a;
}

}  // namespace

MatX input_matrix(const MultibodyModel& model, const VecX& joint_pos) {
  const int nj = model.n_joints();
  const int n = model.dof();
  MatX b = MatX::Zero(2 * n, nj);
  b.bottomRows(n) = immamb(model, joint_pos).rightCols(nj);
  return b;
}

MatX state_matrix(const MultibodyModel& model, const SystemState& state,
                  const MotionVector& base_acc, const VecX& joint_acc,
                  const MotionVector& gravity) {
  const DynamicsWorkspace ws = eidamb(model, state, base_acc, joint_acc, gravity).workspace;
  return assemble_state_matrix(model, ws, immamb(model, state.joint_pos));
}

LinearizationMatrices linearize(const MultibodyModel& model, const SystemState& state,
                                const VecX& tau, const MotionVector& gravity) {
  const int nj = model.n_joints();
  const int n = model.dof();

  const MatX minv = immamb(model, state.joint_pos);
  VecX rhs = -bias_vector(model, state, gravity);
  rhs.tail(nj) += tau;
  const VecX nu_dot = minv * rhs;

  const DynamicsWorkspace ws =
      eidamb(model, state, MotionVector::FromVector(nu_dot.head<6>()), nu_dot.tail(nj), gravity)
          .workspace;

  LinearizationMatrices lin;
  lin.A = assemble_state_matrix(model, ws, minv);
  lin.B = MatX::Zero(2 * n, nj);
  lin.B.bottomRows(n) = minv.rightCols(nj);
  return lin;
}

}  // namespace geolin
