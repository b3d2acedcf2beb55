#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "geolin/model.hpp"
#include "test_helpers.hpp"

using namespace geolin;
using namespace geolin::testing;

namespace {

// Rotation about a unit axis, written out independently of se3_exp.
Mat3 axis_angle(const Vec3& u, double angle) {
  const Mat3 ux = skew(u);
  return Mat3::Identity() + std::sin(angle) * ux + (1.0 - std::cos(angle)) * ux * ux;
}

JointType make_joint(JointKind kind, const Vec3& axis, double pitch = 0.1) {
  return {kind, axis, pitch};
}

}  // namespace

TEST_CASE("jcalc matches the hand-built joint transforms") {
  SUBCASE("revolute about z at zero") {
    const auto [x, gamma] = jcalc(make_joint(JointKind::Revolute, Vec3::UnitZ()), 0.0);
    CHECK(max_abs_diff(x, Mat6::Identity()) == 0.0);
    Vec6 expected = Vec6::Zero();
    expected[5] = 1.0;
    CHECK((gamma - expected).norm() == 0.0);
  }
  SUBCASE("revolute about z at an angle") {
    const double s = 0.7;
    const auto [x, gamma] = jcalc(make_joint(JointKind::Revolute, Vec3::UnitZ()), s);
    Pose child_from_pred{axis_angle(Vec3::UnitZ(), s).transpose(), Vec3::Zero()};
    CHECK(max_abs_diff(x, velocity_transform(child_from_pred)) < 1e-14);
  }
  SUBCASE("prismatic along x") {
    const auto [x, gamma] = jcalc(make_joint(JointKind::Prismatic, Vec3::UnitX()), 0.5);
    Pose child_from_pred{Mat3::Identity(), Vec3(-0.5, 0.0, 0.0)};
    CHECK(max_abs_diff(x, velocity_transform(child_from_pred)) < 1e-15);
    Vec6 expected = Vec6::Zero();
    expected[0] = 1.0;
    CHECK((gamma - expected).norm() == 0.0);
  }
  SUBCASE("helical about z") {
    const double pitch = 0.25, s = 1.1;
    const auto [x, gamma] = jcalc(make_joint(JointKind::Helical, Vec3::UnitZ(), pitch), s);
    // Screw displacement: rotate by s about z while advancing pitch*s along z.
    Pose child_from_pred{axis_angle(Vec3::UnitZ(), s).transpose(), -pitch * s * Vec3::UnitZ()};
    CHECK(max_abs_diff(x, velocity_transform(child_from_pred)) < 1e-14);
    Vec6 expected = Vec6::Zero();
    expected.head<3>() = pitch * Vec3::UnitZ();
    expected.tail<3>() = Vec3::UnitZ();
    CHECK((gamma - expected).norm() == 0.0);
  }
}

TEST_CASE("jcalc_deriv matches a central finite difference of jcalc") {
  Rng rng(21);
  const std::array<JointKind, 3> kinds = {JointKind::Revolute, JointKind::Prismatic,
                                          JointKind::Helical};
  const std::array<Vec3, 3> axes = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  const double h = 1e-6;
  for (int k = 0; k < 1000; ++k) {
    const JointType joint = make_joint(kinds[k % 3], axes[(k / 3) % 3], 0.05 + rng.uniform());
    const double s = 4.0 * centered(rng);
    const Mat6 fd = (jcalc(joint, s + h).transform - jcalc(joint, s - h).transform) / (2.0 * h);
    CHECK(max_abs_diff(jcalc_deriv(joint, s), fd) <= 1e-7);
  }
}

TEST_CASE("prismatic transform family is affine in s") {
  const JointType joint = make_joint(JointKind::Prismatic, Vec3::UnitY());
  CHECK(max_abs_diff(jcalc_deriv(joint, -2.0), jcalc_deriv(joint, 3.5)) == 0.0);
}

TEST_CASE("joint-times-fixed composition stays a velocity transform") {
  Rng rng(22);
  const std::array<JointKind, 3> kinds = {JointKind::Revolute, JointKind::Prismatic,
                                          JointKind::Helical};
  for (int k = 0; k < 200; ++k) {
    const JointType joint = make_joint(kinds[k % 3], Vec3::UnitZ());
    const Mat6 x = jcalc(joint, centered(rng)).transform * velocity_transform(random_pose(rng));
    // A velocity transform has the block structure [[R, S R], [0, R]] with
    // R in SO(3) and S skew.
    const Mat3 r = x.bottomRightCorner<3, 3>();
    CHECK(max_abs_diff(r.transpose() * r, Mat3::Identity()) <= 1e-12);
    CHECK(max_abs_diff(x.topLeftCorner<3, 3>(), r) <= 1e-12);
    CHECK(x.bottomLeftCorner<3, 3>().norm() <= 1e-12);
    const Mat3 s = x.topRightCorner<3, 3>() * r.transpose();
    CHECK((s + s.transpose()).norm() <= 1e-12);
  }
}

TEST_CASE("build_test_system satisfies the selection criteria") {
  const MultibodyModel model = build_test_system();
  CHECK(model.n_bodies == 9);
  CHECK(model.n_joints() == 9);
  model.validate();

  int base_children = 0;
  std::vector<int> child_count(10, 0);
  std::set<std::pair<int, int>> kind_axis;
  int kind_count[3] = {0, 0, 0};
  for (int i = 1; i <= 9; ++i) {
    if (model.parent_of(i) == 0) ++base_children;
    ++child_count[model.parent_of(i)];
    const JointType& j = model.joint(i);
    ++kind_count[static_cast<int>(j.kind)];
    int axis = j.axis.x() > 0.5 ? 0 : (j.axis.y() > 0.5 ? 1 : 2);
    kind_axis.insert({static_cast<int>(j.kind), axis});
  }
  CHECK(base_children >= 2);
  CHECK(kind_count[0] == 3);
  CHECK(kind_count[1] == 3);
  CHECK(kind_count[2] == 3);
  CHECK(kind_axis.size() == 9);  // every (type, axis) combination present
  bool child_branch = false;
  for (int i = 1; i <= 9; ++i) child_branch |= child_count[i] >= 2;
  CHECK(child_branch);
  CHECK(save_model(build_test_system()) == save_model(model));
}

TEST_CASE("model document round trip") {
  const MultibodyModel model = build_test_system();
  const MultibodyModel reloaded = load_model(save_model(model));
  CHECK(reloaded.n_bodies == model.n_bodies);
  CHECK(save_model(reloaded) == save_model(model));
}

TEST_CASE("load_model accepts a base-only document") {
  const MultibodyModel base_only = load_model(
      "# single rigid body\n"
      "base inertia=2,0,0,0,0,0,2,0,0,0,0,2,0,0,0,1,0,0,1,0,1\n");
  CHECK(base_only.n_bodies == 0);
  CHECK(base_only.inertias.size() == 1);
  CHECK(base_only.inertias[0](0, 0) == 2.0);
}

TEST_CASE("load_model rejects bad topology and malformed input") {
  const std::string base_line = "base inertia=2,0,0,0,0,0,2,0,0,0,0,2,0,0,0,1,0,0,1,0,1\n";
  const std::string inertia = "2,0,0,0,0,0,2,0,0,0,0,2,0,0,0,1,0,0,1,0,1";
  const std::string xform = "1,0,0,0,1,0,0,0,1,0,0,0";

  SUBCASE("parent above the body id") {
    CHECK_THROWS_AS(load_model(base_line + "body 1 parent=5 joint=revolute axis=z xform=" + xform +
                               " inertia=" + inertia + "\n"),
                    ModelError);
  }
  SUBCASE("unknown joint type reports the line") {
    try {
      load_model(base_line + "body 1 parent=0 joint=spherical axis=z xform=" + xform +
                 " inertia=" + inertia + "\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
      CHECK(e.field_name == "joint");
    }
  }
  SUBCASE("wrong float count") {
    CHECK_THROWS_AS(load_model(base_line + "body 1 parent=0 joint=revolute axis=z xform=1,2,3" +
                               " inertia=" + inertia + "\n"),
                    ParseError);
  }
  SUBCASE("non-SPD inertia") {
    const std::string zeros = "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0";
    CHECK_THROWS_AS(load_model("base inertia=" + zeros + "\n"), ModelError);
  }
  SUBCASE("missing base line") {
    CHECK_THROWS_AS(load_model("body 1 parent=0 joint=revolute axis=z xform=" + xform +
                               " inertia=" + inertia + "\n"),
                    ParseError);
  }
}

TEST_CASE("scientific notation floats parse exactly") {
  const MultibodyModel model = load_model(
      "base inertia=2.5e0,0,0,0,0,0,2.5E+00,0,0,0,0,2.5,0,0,0,1e0,0,0,1.0,0,0.25e1\n");
  CHECK(model.inertias[0](0, 0) == 2.5);
  CHECK(model.inertias[0](5, 5) == 2.5);
}

TEST_CASE("random_model is deterministic and SPD") {
  CHECK(save_model(random_model(7, 12)) == save_model(random_model(7, 12)));
  CHECK(random_model(7, 0).n_bodies == 0);
  for (int k = 0; k < 100; ++k) {
    const MultibodyModel model = random_model(1000 + k, 1 + k % 8);
    for (const SpatialInertia& m : model.inertias) {
      Eigen::SelfAdjointEigenSolver<Mat6> eig(m);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
    for (int i = 1; i <= model.n_bodies; ++i) CHECK(model.parent_of(i) < i);
  }
}

TEST_CASE("random_state is deterministic, bounded, and on the group") {
  const MultibodyModel model = build_test_system();
  const SystemState a = random_state(99, model);
  const SystemState b = random_state(99, model);
  CHECK((a.joint_pos - b.joint_pos).norm() == 0.0);
  CHECK((a.base_twist.vector() - b.base_twist.vector()).norm() == 0.0);
  CHECK(max_abs_diff(a.base_pose.rotation, b.base_pose.rotation) == 0.0);

  for (int k = 0; k < 50; ++k) {
    const SystemState s = random_state(200 + k, model);
    CHECK(s.joint_pos.minCoeff() >= 0.0);
    CHECK(s.joint_pos.maxCoeff() < 1.0);
    CHECK(s.joint_vel.minCoeff() >= 0.0);
    CHECK(s.joint_vel.maxCoeff() < 1.0);
    CHECK(s.base_pose.orthogonality_error() <= 1e-10);
  }
}
