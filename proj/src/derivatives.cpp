#include "geolin/derivatives.hpp"

#include <vector>

namespace geolin {

namespace {

// Columnwise cross products of a direction matrix against a fixed vector:
// column k of the result is cross_motion(d.col(k)) * w, resp.
// cross_force(d.col(k)) * f.
MatX colwise_cross_motion(const MatX& directions, const Vec6& w) {
  return -cross_motion(w) * directions;
}

MatX colwise_cross_force(const MatX& directions, const Vec6& f) {
  return cross_force_jacobian(f) * directions;
}

// Derivative of the child-from-parent transform with respect to the joint
// position, d(X_joint * X_fixed)/ds_i.
Mat6 dX_parent_ds(const MultibodyModel& model, const DynamicsWorkspace& ws, int body) {
  return jcalc_deriv(model.joint(body), ws.joint_pos[body - 1]) *
         velocity_transform(model.fixed_transform(body));
}

MatX stack(const MatX& base_rows, const MatX& joint_rows) {
  MatX out(base_rows.rows() + joint_rows.rows(), base_rows.cols());
  out << base_rows, joint_rows;
  return out;
}

}  // namespace

Mat6 dXv_dH(const Mat3& rotation_0A, const Vec3& origin_A0, const Vec6& w_A) {
  const Vec3 lin = w_A.head<3>();
  const Vec3 ang = w_A.tail<3>();
  const Mat3 rot_block = rotation_0A * skew(ang) * rotation_0A.transpose();
  Mat6 d = Mat6::Zero();
  d.topLeftCorner<3, 3>() = rot_block;
  d.topRightCorner<3, 3>() =
      rotation_0A * skew(lin - origin_A0.cross(ang)) * rotation_0A.transpose();
  d.bottomRightCorner<3, 3>() = rot_block;
  return d;
}

MatX did_dH(const MultibodyModel& model, const DynamicsWorkspace& ws) {
  const int nb = ws.n_bodies();
  const Mat3 rotation_0A = ws.base_pose.rotation.transpose();
  const Vec3 origin_A0 = ws.base_pose.origin;

  std::vector<MatX> dv(nb + 1), da_rel(nb + 1), dm(nb + 1), db_comp(nb + 1);
  dv[0] = dXv_dH(rotation_0A, origin_A0, ws.base_twist_A);
  da_rel[0] = dXv_dH(rotation_0A, origin_A0, ws.gravity_A);
  dm[0] = model.inertias[0] * dv[0];
  db_comp[0] = model.inertias[0] * da_rel[0] + colwise_cross_force(dv[0], ws.momentum[0]) +
               cross_force(ws.v[0]) * dm[0];

  for (int i = 1; i <= nb; ++i) {
    const int parent = model.parent_of(i);
    dv[i] = ws.X_parent[i] * dv[parent];
    da_rel[i] = ws.X_parent[i] * da_rel[parent] + colwise_cross_motion(dv[i], ws.v_joint[i]);
    dm[i] = model.inertias[i] * dv[i];
    db_comp[i] = model.inertias[i] * da_rel[i] + colwise_cross_force(dv[i], ws.momentum[i]) +
                 cross_force(ws.v[i]) * dm[i];
  }
  for (int i = nb; i >= 1; --i) {
    db_comp[model.parent_of(i)] += ws.X_parent[i].transpose() * db_comp[i];
  }

  MatX joint_rows(nb, 6);
  for (int i = 1; i <= nb; ++i) {
    joint_rows.row(i - 1) = ws.subspace[i].transpose() * db_comp[i];
  }
  return stack(db_comp[0], joint_rows);
}

MatX did_ds(const MultibodyModel& model, const DynamicsWorkspace& ws, const MotionVector& base_acc,
            const VecX& joint_acc) {
  const int nb = ws.n_bodies();
  const int nj = model.n_joints();
  const Vec6 a0 = base_acc.vector();

  std::vector<Mat6> dx(nb + 1, Mat6::Zero());
  for (int i = 1; i <= nb; ++i) dx[i] = dX_parent_ds(model, ws, i);

  std::vector<MatX> dv(nb + 1, MatX::Zero(6, nj));
  std::vector<MatX> da_rel(nb + 1, MatX::Zero(6, nj));
  std::vector<MatX> da_vp(nb + 1, MatX::Zero(6, nj));
  std::vector<MatX> dm(nb + 1, MatX::Zero(6, nj));
  std::vector<MatX> db_comp(nb + 1, MatX::Zero(6, nj));
  std::vector<MatX> db_vp(nb + 1, MatX::Zero(6, nj));
  std::vector<std::vector<Mat6>> dMc(nb + 1, std::vector<Mat6>(nj, Mat6::Zero()));

  for (int i = 1; i <= nb; ++i) {
    const int parent = model.parent_of(i);
    dv[i] = ws.X_parent[i] * dv[parent];
    dv[i].col(i - 1) += dx[i] * ws.v[parent];
    da_rel[i] =
        ws.X_parent[i] * da_rel[parent] + colwise_cross_motion(dv[i], ws.v_joint[i]);
    da_rel[i].col(i - 1) += dx[i] * ws.a_rel[parent];
    da_vp[i] = ws.X_parent[i] * da_vp[parent] + colwise_cross_motion(dv[i], ws.v_joint[i]);
    da_vp[i].col(i - 1) += dx[i] * ws.a_vp[parent];
    dm[i] = model.inertias[i] * dv[i];
    const MatX shared =
        colwise_cross_force(dv[i], ws.momentum[i]) + cross_force(ws.v[i]) * dm[i];
    db_comp[i] = model.inertias[i] * da_rel[i] + shared;
    db_vp[i] = model.inertias[i] * da_vp[i] + shared;
  }

  for (int i = nb; i >= 1; --i) {
    const int parent = model.parent_of(i);
    const Mat6 wrench_x = ws.X_parent[i].transpose();
    for (int k = 0; k < nj; ++k) {
      dMc[parent][k] += wrench_x * dMc[i][k] * ws.X_parent[i];
    }
    dMc[parent][i - 1] += dx[i].transpose() * ws.inertia_comp[i] * ws.X_parent[i] +
                          wrench_x * ws.inertia_comp[i] * dx[i];
    db_comp[parent] += wrench_x * db_comp[i];
    db_comp[parent].col(i - 1) += dx[i].transpose() * ws.bias_comp[i];
    db_vp[parent] += wrench_x * db_vp[i];
    db_vp[parent].col(i - 1) += dx[i].transpose() * ws.bias_vp[i];
  }

  MatX dMc0_a0(6, nj);
  for (int k = 0; k < nj; ++k) dMc0_a0.col(k) = dMc[0][k] * a0;

  std::vector<MatX> da_base(nb + 1, MatX::Zero(6, nj));
  MatX dF_rdot = MatX::Zero(6, nj);
  MatX joint_rows(nb, nj);
  for (int i = 1; i <= nb; ++i) {
    const int parent = model.parent_of(i);
    da_base[i] = ws.X_parent[i] * da_base[parent];
    da_base[i].col(i - 1) += dx[i] * ws.a_base[parent];

    MatX dMci_abase(6, nj);
    MatX dF(6, nj);  // derivative of the unit wrench of joint i, in frame i
    for (int k = 0; k < nj; ++k) {
      dMci_abase.col(k) = dMc[i][k] * ws.a_base[i];
      dF.col(k) = dMc[i][k] * ws.subspace[i];
    }
    joint_rows.row(i - 1) = ws.subspace[i].transpose() *
                            (dMci_abase + ws.inertia_comp[i] * da_base[i] + db_comp[i]);

    // Walk the unit wrench and its derivative down to the base frame,
    // picking up the transform derivative at every hop.
    Vec6 f = ws.inertia_comp[i] * ws.subspace[i];
    for (int j = i; j != 0; j = model.parent_of(j)) {
      const Mat6 wrench_x = ws.X_parent[j].transpose();
      dF = wrench_x * dF;
      dF.col(j - 1) += dx[j].transpose() * f;
      f = wrench_x * f;
    }
    dF_rdot += dF * joint_acc[i - 1];
  }

  return stack(dMc0_a0 + dF_rdot + db_vp[0], joint_rows);
}

MatX did_dv(const MultibodyModel& model, const DynamicsWorkspace& ws) {
  const int nb = ws.n_bodies();

  std::vector<MatX> dv(nb + 1), da_rel(nb + 1), dm(nb + 1), db_comp(nb + 1);
  dv[0] = Mat6::Identity();
  da_rel[0] = Mat6::Zero();
  dm[0] = model.inertias[0];
  db_comp[0] = colwise_cross_force(dv[0], ws.momentum[0]) + cross_force(ws.v[0]) * dm[0];

  for (int i = 1; i <= nb; ++i) {
    const int parent = model.parent_of(i);
    dv[i] = ws.X_parent[i] * dv[parent];
    da_rel[i] = ws.X_parent[i] * da_rel[parent] + colwise_cross_motion(dv[i], ws.v_joint[i]);
    dm[i] = model.inertias[i] * dv[i];
    db_comp[i] = model.inertias[i] * da_rel[i] + colwise_cross_force(dv[i], ws.momentum[i]) +
                 cross_force(ws.v[i]) * dm[i];
  }
  for (int i = nb; i >= 1; --i) {
    db_comp[model.parent_of(i)] += ws.X_parent[i].transpose() * db_comp[i];
  }

  MatX joint_rows(nb, 6);
  for (int i = 1; i <= nb; ++i) {
    joint_rows.row(i - 1) = ws.subspace[i].transpose() * db_comp[i];
  }
  return stack(db_comp[0], joint_rows);
}

MatX did_dr(const MultibodyModel& model, const DynamicsWorkspace& ws) {
  const int nb = ws.n_bodies();
  const int nj = model.n_joints();

  std::vector<MatX> dv(nb + 1, MatX::Zero(6, nj));
  std::vector<MatX> da_rel(nb + 1, MatX::Zero(6, nj));
  std::vector<MatX> dm(nb + 1, MatX::Zero(6, nj));
  std::vector<MatX> db_comp(nb + 1, MatX::Zero(6, nj));

  for (int i = 1; i <= nb; ++i) {
    const int parent = model.parent_of(i);
    dv[i] = ws.X_parent[i] * dv[parent];
    dv[i].col(i - 1) += ws.subspace[i];
    da_rel[i] = ws.X_parent[i] * da_rel[parent] + colwise_cross_motion(dv[i], ws.v_joint[i]);
    da_rel[i].col(i - 1) += cross_motion(ws.v[i]) * ws.subspace[i];
    dm[i] = model.inertias[i] * dv[i];
    db_comp[i] = model.inertias[i] * da_rel[i] + colwise_cross_force(dv[i], ws.momentum[i]) +
                 cross_force(ws.v[i]) * dm[i];
  }
  for (int i = nb; i >= 1; --i) {
    db_comp[model.parent_of(i)] += ws.X_parent[i].transpose() * db_comp[i];
  }

  MatX joint_rows(nb, nj);
  for (int i = 1; i <= nb; ++i) {
    joint_rows.row(i - 1) = ws.subspace[i].transpose() * db_comp[i];
  }
  return stack(db_comp[0], joint_rows);
}

IdJacobians id_jacobians(const MultibodyModel& model, const DynamicsWorkspace& ws) {
  return {did_dH(model, ws),
          did_ds(model, ws, MotionVector::FromVector(ws.base_acc), ws.joint_acc),
          did_dv(model, ws), did_dr(model, ws)};
}

}  // namespace geolin
