#include <doctest.h>

#include <cmath>

#include "geolin/spatial.hpp"
#include "test_helpers.hpp"

using namespace geolin;
using namespace geolin::testing;

TEST_CASE("se3_exp of zero is the identity") {
  const Pose p = se3_exp(Vec6::Zero());
  CHECK(max_abs_diff(p.rotation, Mat3::Identity()) == 0.0);
  CHECK(p.origin.norm() == 0.0);
}

TEST_CASE("se3_exp of a pure x rotation reproduces the Rodrigues matrix") {
  Vec6 xi = Vec6::Zero();
  xi[3] = M_PI / 2.0;
  const Pose p = se3_exp(xi);
  // Rodrigues formula for a quarter turn about x, evaluated by hand.
  Mat3 expected;
  expected << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK(max_abs_diff(p.rotation, expected) < 1e-15);
  CHECK(p.origin.norm() == 0.0);
}

TEST_CASE("se3_log of the identity is zero, pure translation is exact") {
  CHECK(se3_log(Pose::Identity()).norm() == 0.0);
  Vec6 xi = Vec6::Zero();
  xi.head<3>() << 0.1, 0.2, 0.3;
  CHECK((se3_log(se3_exp(xi)) - xi).norm() < 1e-15);
}

TEST_CASE("exp/log roundtrip within the principal branch") {
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const Vec6 xi = centered_vec6(rng);  // |angular| <= sqrt(3) < pi - 0.1
    CHECK((se3_log(se3_exp(xi)) - xi).norm() <= 1e-10);
    const Pose p = random_pose(rng);
    const Pose q = se3_exp(se3_log(p));
    CHECK(max_abs_diff(q.rotation, p.rotation) <= 1e-10);
    CHECK((q.origin - p.origin).norm() <= 1e-10);
  }
}

TEST_CASE("se3_log rejects rotations at the branch boundary") {
  Vec6 xi = Vec6::Zero();
  xi[5] = M_PI - 1e-8;
  CHECK_THROWS_AS(se3_log(se3_exp(xi)), std::domain_error);
}

TEST_CASE("pose composition and inverse close within SE(3)") {
  Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    const Pose a = random_pose(rng), b = random_pose(rng);
    const Pose c = a * b;
    CHECK(c.orthogonality_error() <= 1e-12);
    const Pose ident = c * c.inverse();
    CHECK(max_abs_diff(ident.rotation, Mat3::Identity()) <= 1e-12);
    CHECK(ident.origin.norm() <= 1e-12);
  }
}

TEST_CASE("velocity_transform basics") {
  CHECK(max_abs_diff(velocity_transform(Pose::Identity()), Mat6::Identity()) == 0.0);

  // Pure translation: X = [[I, p^], [0, I]].
  Pose shift;
  shift.origin << 1, 0, 0;
  Mat6 expected = Mat6::Identity();
  expected.topRightCorner<3, 3>() = skew(shift.origin);
  CHECK(max_abs_diff(velocity_transform(shift), expected) == 0.0);
}

TEST_CASE("velocity_transform composes as a homomorphism") {
  Rng rng(13);
  for (int k = 0; k < 1000; ++k) {
    const Pose a = random_pose(rng), b = random_pose(rng);
    CHECK(max_abs_diff(velocity_transform(a * b), velocity_transform(a) * velocity_transform(b)) <=
          1e-12);
    CHECK(max_abs_diff(velocity_transform(a) * velocity_transform(a.inverse()), Mat6::Identity()) <=
          1e-12);
  }
}

TEST_CASE("wrench_transform preserves power and is the inverse-transpose") {
  CHECK(max_abs_diff(wrench_transform(Pose::Identity()), Mat6::Identity()) == 0.0);
  Rng rng(14);
  for (int k = 0; k < 500; ++k) {
    const Pose h = random_pose(rng);
    const Vec6 f = centered_vec6(rng), v = centered_vec6(rng);
    const double power = f.dot(v);
    CHECK(std::abs((wrench_transform(h) * f).dot(velocity_transform(h) * v) - power) <=
          1e-11 * (1.0 + std::abs(power)));
    CHECK(max_abs_diff(wrench_transform(h), velocity_transform(h.inverse()).transpose()) <= 1e-12);
  }
}

TEST_CASE("cross_motion block structure and antisymmetry") {
  CHECK(cross_motion(Vec6::Zero()).norm() == 0.0);

  Vec6 ez = Vec6::Zero();
  ez[5] = 1.0;
  const Mat6 m = cross_motion(ez);
  CHECK(max_abs_diff(m.topLeftCorner<3, 3>(), skew(Vec3::UnitZ())) == 0.0);
  CHECK(max_abs_diff(m.bottomRightCorner<3, 3>(), skew(Vec3::UnitZ())) == 0.0);
  CHECK(m.topRightCorner<3, 3>().norm() == 0.0);

  Rng rng(15);
  for (int k = 0; k < 500; ++k) {
    const Vec6 a = centered_vec6(rng), b = centered_vec6(rng);
    CHECK((cross_motion(a) * b + cross_motion(b) * a).norm() <= 1e-12);
  }
}

TEST_CASE("cross_motion satisfies the Jacobi identity") {
  Rng rng(16);
  for (int k = 0; k < 1000; ++k) {
    const Vec6 a = centered_vec6(rng), b = centered_vec6(rng), c = centered_vec6(rng);
    const Vec6 jac = cross_motion(a) * (cross_motion(b) * c) +
                     cross_motion(b) * (cross_motion(c) * a) +
                     cross_motion(c) * (cross_motion(a) * b);
    CHECK(jac.norm() <= 1e-10);
  }
}

TEST_CASE("cross_force is the negative transpose of cross_motion") {
  CHECK(cross_force(Vec6::Zero()).norm() == 0.0);
  Rng rng(17);
  for (int k = 0; k < 500; ++k) {
    const Vec6 v = centered_vec6(rng);
    CHECK((cross_force(v) + cross_motion(v).transpose()).norm() == 0.0);
  }
}

TEST_CASE("cross_force_jacobian swaps the arguments of the dual cross product") {
  Rng rng(18);
  for (int k = 0; k < 500; ++k) {
    const Vec6 a = centered_vec6(rng), f = centered_vec6(rng);
    CHECK((cross_force_jacobian(f) * a - cross_force(a) * f).norm() <= 1e-14);
  }
}

TEST_CASE("motion and force vector wrappers round-trip") {
  Rng rng(19);
  const Vec6 v = centered_vec6(rng);
  CHECK((MotionVector::FromVector(v).vector() - v).norm() == 0.0);
  CHECK((ForceVector::FromVector(v).vector() - v).norm() == 0.0);
  const MotionVector mv = MotionVector::FromVector(v);
  CHECK(mv.linear == v.head<3>());
  CHECK(mv.angular == v.tail<3>());
}
