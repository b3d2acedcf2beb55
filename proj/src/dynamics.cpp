#include "geolin/dynamics.hpp"

#include <atomic>
#include <stdexcept>

namespace geolin {

namespace {

std::atomic<std::uint64_t> g_immamb_calls{0};

void check_dimensions(const MultibodyModel& model, const SystemState& state,
                      const VecX& joint_acc) {
  if (state.joint_pos.size() != model.n_joints() || state.joint_vel.size() != model.n_joints() ||
      joint_acc.size() != model.n_joints()) {
    throw std::invalid_argument("state/acceleration dimensions do not match the model");
  }
}

}  // namespace

EidambResult eidamb(const MultibodyModel& model, const SystemState& state,
                    const MotionVector& base_acc, const VecX& joint_acc,
                    const MotionVector& gravity) {
  check_dimensions(model, state, joint_acc);
  const int nb = model.n_bodies;

  DynamicsWorkspace ws;
  ws.base_pose = state.base_pose;
  ws.joint_pos = state.joint_pos;
  ws.base_twist_A = state.base_twist.vector();
  ws.joint_vel = state.joint_vel;
  ws.base_acc = base_acc.vector();
  ws.joint_acc = joint_acc;
  ws.gravity_A = gravity.vector();

  ws.X_joint.assign(nb + 1, Mat6::Identity());
  ws.X_parent.assign(nb + 1, Mat6::Identity());
  ws.subspace.assign(nb + 1, Vec6::Zero());
  ws.v.assign(nb + 1, Vec6::Zero());
  ws.v_joint.assign(nb + 1, Vec6::Zero());
  ws.a_rel.assign(nb + 1, Vec6::Zero());
  ws.a_vp.assign(nb + 1, Vec6::Zero());
  ws.a_base.assign(nb + 1, Vec6::Zero());
  ws.momentum.assign(nb + 1, Vec6::Zero());
  ws.inertia_comp.assign(nb + 1, Mat6::Zero());
  ws.bias_comp.assign(nb + 1, Vec6::Zero());
  ws.bias_vp.assign(nb + 1, Vec6::Zero());
  ws.unit_wrenches = MatX::Zero(6, nb);

  // Base frame quantities.
  ws.X_base = velocity_transform(state.base_pose.inverse());
  ws.v[0] = ws.X_base * ws.base_twist_A;
  ws.a_rel[0] = ws.X_base * ws.gravity_A;
  ws.a_vp[0] = ws.a_rel[0];
  ws.inertia_comp[0] = model.inertias[0];
  ws.momentum[0] = model.inertias[0] * ws.v[0];
  ws.bias_comp[0] = model.inertias[0] * ws.a_rel[0] + cross_force(ws.v[0]) * ws.momentum[0];
  ws.bias_vp[0] = ws.bias_comp[0];

  // Outward kinematic sweep.
  for (int i = 1; i <= nb; ++i) {
    const JointKinematics jk = jcalc(model.joint(i), state.joint_pos[i - 1]);
    ws.X_joint[i] = jk.transform;
    ws.subspace[i] = jk.subspace;
    ws.v_joint[i] = jk.subspace * state.joint_vel[i - 1];
    ws.X_parent[i] = jk.transform * velocity_transform(model.fixed_transform(i));
    const int parent = model.parent_of(i);
    ws.v[i] = ws.X_parent[i] * ws.v[parent] + ws.v_joint[i];
    ws.a_rel[i] = ws.X_parent[i] * ws.a_rel[parent] + ws.subspace[i] * joint_acc[i - 1] +
                  cross_motion(ws.v[i]) * ws.v_joint[i];
    ws.a_vp[i] = ws.X_parent[i] * ws.a_vp[parent] + cross_motion(ws.v[i]) * ws.v_joint[i];
    ws.inertia_comp[i] = model.inertias[i];
    ws.momentum[i] = model.inertias[i] * ws.v[i];
    ws.bias_comp[i] = model.inertias[i] * ws.a_rel[i] + cross_force(ws.v[i]) * ws.momentum[i];
    ws.bias_vp[i] = model.inertias[i] * ws.a_vp[i] + cross_force(ws.v[i]) * ws.momentum[i];
  }

  // Inward composite sweep.
  for (int i = nb; i >= 1; --i) {
    const int parent = model.parent_of(i);
    const Mat6 wrench_x = ws.X_parent[i].transpose();
    ws.inertia_comp[parent] += wrench_x * ws.inertia_comp[i] * ws.X_parent[i];
    ws.bias_comp[parent] += wrench_x * ws.bias_comp[i];
    ws.bias_vp[parent] += wrench_x * ws.bias_vp[i];
  }

  // Torque sweep plus unit-acceleration wrenches.
  ExtendedTorque torque;
  torque.joint_torques = VecX::Zero(nb);
  ws.a_base[0] = ws.base_acc;
  for (int i = 1; i <= nb; ++i) {
    ws.a_base[i] = ws.X_parent[i] * ws.a_base[model.parent_of(i)];
    torque.joint_torques[i - 1] =
        ws.subspace[i].dot(ws.inertia_comp[i] * ws.a_base[i] + ws.bias_comp[i]);
    // Walk the unit wrench down to the base frame.
    Vec6 f = ws.inertia_comp[i] * ws.subspace[i];
    for (int j = i; j != 0; j = model.parent_of(j)) {
      f = ws.X_parent[j].transpose() * f;
    }
    ws.unit_wrenches.col(i - 1) = f;
  }
  Vec6 base_wrench = ws.inertia_comp[0] * ws.base_acc + ws.bias_vp[0];
  base_wrench.noalias() += ws.unit_wrenches * joint_acc;
  torque.base_wrench = ForceVector::FromVector(base_wrench);

  return {std::move(torque), std::move(ws)};
}

MotionVector consistent_base_acceleration(const DynamicsWorkspace& workspace) {
  Eigen::LDLT<Mat6> ldlt(workspace.inertia_comp[0]);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw ModelError("composite inertia of the base is singular");
  }
  return MotionVector::FromVector(-ldlt.solve(workspace.bias_comp[0]));
}

VecX bias_vector(const MultibodyModel& model, const SystemState& state,
                 const MotionVector& gravity) {
  return eidamb(model, state, MotionVector{}, VecX::Zero(model.n_joints()), gravity)
      .torque.stacked();
}

MatX mass_matrix(const MultibodyModel& model, const VecX& joint_pos) {
  const int n = model.dof();
  SystemState rest;
  rest.base_pose = Pose::Identity();
  rest.joint_pos = joint_pos;
  rest.base_twist = MotionVector{};
  rest.joint_vel = VecX::Zero(model.n_joints());
  const MotionVector no_gravity{Vec3::Zero(), Vec3::Zero()};

  const VecX offset =
      eidamb(model, rest, MotionVector{}, VecX::Zero(model.n_joints()), no_gravity)
          .torque.stacked();

  MatX m(n, n);
  for (int j = 0; j < n; ++j) {
    Vec6 base_acc = Vec6::Zero();
    VecX joint_acc = VecX::Zero(model.n_joints());
    if (j < 6) {
      base_acc[j] = 1.0;
    } else {
      joint_acc[j - 6] = 1.0;
    }
    m.col(j) = eidamb(model, rest, MotionVector::FromVector(base_acc), joint_acc, no_gravity)
                   .torque.stacked() -
               offset;
  }
  return m;
}

MatX immamb(const MultibodyModel& model, const VecX& joint_pos) {
  g_immamb_calls.fetch_add(1, std::memory_order_relaxed);
  if (joint_pos.size() != model.n_joints()) {
    throw std::invalid_argument("joint_pos dimension does not match the model");
  }
  const int nb = model.n_bodies;
  const int n = model.dof();

  std::vector<Mat6> x_parent(nb + 1, Mat6::Identity());
  std::vector<Vec6> subspace(nb + 1, Vec6::Zero());
  std::vector<Mat6> inertia_art(nb + 1, Mat6::Zero());
  inertia_art[0] = model.inertias[0];
  for (int i = 1; i <= nb; ++i) {
    const JointKinematics jk = jcalc(model.joint(i), joint_pos[i - 1]);
    x_parent[i] = jk.transform * velocity_transform(model.fixed_transform(i));
    subspace[i] = jk.subspace;
    inertia_art[i] = model.inertias[i];
  }

  // subtree(i) as joint-column index sets, offset into the joint block.
  std::vector<std::vector<int>> subtree(nb + 1);
  for (int i = nb; i >= 1; --i) {
    subtree[i].insert(subtree[i].begin(), i);
    auto& up = subtree[model.parent_of(i)];
    up.insert(up.end(), subtree[i].begin(), subtree[i].end());
  }

  MatX minv = MatX::Zero(n, n);
  std::vector<MatX> wrench_set(nb + 1, MatX::Zero(6, n));
  std::vector<Vec6> u(nb + 1, Vec6::Zero());
  VecX d_inv(nb + 1);

  for (int i = nb; i >= 1; --i) {
    u[i] = inertia_art[i] * subspace[i];
    const double d = subspace[i].dot(u[i]);
    if (!(d > 0.0)) {
      throw ModelError("articulated inertia of joint " + std::to_string(i) + " is singular");
    }
    d_inv[i] = 1.0 / d;
    minv(i + 5, i + 5) = d_inv[i];
    for (int col : subtree[i]) {
      minv(i + 5, col + 5) -= d_inv[i] * subspace[i].dot(wrench_set[i].col(col + 5));
    }
    const int parent = model.parent_of(i);
    const Mat6 wrench_x = x_parent[i].transpose();
    for (int col : subtree[i]) {
      wrench_set[parent].col(col + 5) +=
          wrench_x * (wrench_set[i].col(col + 5) + u[i] * minv(i + 5, col + 5));
    }
    const Mat6 apparent = inertia_art[i] - u[i] * (d_inv[i] * u[i].transpose());
    inertia_art[parent] += wrench_x * apparent * x_parent[i];
  }

  Eigen::LDLT<Mat6> base_ldlt(inertia_art[0]);
  if (base_ldlt.info() != Eigen::Success || !base_ldlt.isPositive()) {
    throw ModelError("articulated inertia of the base is singular");
  }

  std::vector<MatX> motion_set(nb + 1, MatX::Zero(6, n));
  if (nb > 0) {
    motion_set[0].rightCols(nb) = -base_ldlt.solve(wrench_set[0].rightCols(nb));
  }
  for (int i = 1; i <= nb; ++i) {
    const int parent = model.parent_of(i);
    const int tail = n - (i + 5);
    minv.row(i + 5).tail(tail) -=
        d_inv[i] * (u[i].transpose() * x_parent[i] * motion_set[parent].rightCols(tail));
    motion_set[i].rightCols(tail) = subspace[i] * minv.row(i + 5).tail(tail) +
                                    x_parent[i] * motion_set[parent].rightCols(tail);
  }

  if (nb > 0) {
    minv.topRightCorner(6, nb) = motion_set[0].rightCols(nb);
    minv.bottomLeftCorner(nb, 6) = minv.topRightCorner(6, nb).transpose();
  }
  for (int i = 1; i <= nb; ++i) {
    for (int j = i; j <= nb; ++j) {
      minv(j + 5, i + 5) = minv(i + 5, j + 5);
    }
  }
  minv.topLeftCorner<6, 6>() = base_ldlt.solve(Mat6::Identity());
  return minv;
}

std::uint64_t immamb_call_count() { return g_immamb_calls.load(std::memory_order_relaxed); }

Accelerations forward_dynamics(const MultibodyModel& model, const SystemState& state,
                               const VecX& tau, const MotionVector& gravity) {
  if (tau.size() != model.n_joints()) {
    throw std::invalid_argument("tau dimension does not match the model");
  }
  const VecX h = bias_vector(model, state, gravity);
  VecX rhs = -h;
  rhs.tail(model.n_joints()) += tau;
  const VecX nu_dot = immamb(model, state.joint_pos) * rhs;
  return {MotionVector::FromVector(nu_dot.head<6>()), nu_dot.tail(model.n_joints())};
}

}  // namespace geolin
