#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "psm/kinematics.hpp"

using namespace psm;
using psm::test::random_vec;
using psm::test::vec;

namespace {

constexpr double kPi = std::numbers::pi;

Isometry3 translation(double x, double y, double z) {
  Isometry3 T = Isometry3::Identity();
  T.translation() = Vector3(x, y, z);
  return T;
}

Joint revolute(const Vector3& axis, const Isometry3& origin = Isometry3::Identity()) {
  Joint j;
  j.axis = axis;
  j.origin = origin;
  return j;
}

SerialChain planar_two_link() {
  return SerialChain("planar", Isometry3::Identity(),
                     {revolute(Vector3::UnitZ()), revolute(Vector3::UnitZ(), translation(1, 0, 0))},
                     translation(1, 0, 0));
}

RobotPtr single(SerialChain c) { return std::make_shared<const MultiRobotSystem>(std::vector<SerialChain>{c}); }

// Spatial arm with mixed joint types and non-trivial origins.
SerialChain spatial_arm() {
  Joint slide;
  slide.type = JointType::Prismatic;
  slide.axis = Vector3(0, 0.6, 0.8);
  slide.lower = -1;
  slide.upper = 1;
  Isometry3 tilted = translation(0.1, 0.0, 0.3);
  tilted.linear() = Eigen::AngleAxisd(0.4, Vector3(1, 1, 0).normalized()).toRotationMatrix();
  return SerialChain("spatial", translation(0.2, -0.1, 0.05),
                     {revolute(Vector3::UnitZ()), revolute(Vector3::UnitY(), translation(0, 0, 0.2)), slide,
                      revolute(Vector3::UnitX(), tilted)},
                     translation(0.15, 0, 0));
}

// Independent 4x4 homogeneous-transform oracle (Rodrigues rotation).
Eigen::Matrix4d homogeneous(const Isometry3& T) { return T.matrix(); }

Eigen::Matrix4d rodrigues(const Vector3& axis, double angle) {
  Eigen::Matrix3d K;
  K << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
  M.topLeftCorner<3, 3>() = Eigen::Matrix3d::Identity() + std::sin(angle) * K + (1 - std::cos(angle)) * K * K;
  return M;
}

Eigen::Matrix4d slide_matrix(const Vector3& axis, double d) {
  Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
  M.topRightCorner<3, 1>() = axis * d;
  return M;
}

Vector3 oracle_position(const SerialChain& c, const Vector& q, const Vector3& point) {
  Eigen::Matrix4d M = homogeneous(c.base());
  for (int i = 0; i < c.dof(); ++i) {
    const Joint& j = c.joints()[static_cast<std::size_t>(i)];
    M = M * homogeneous(j.origin) *
        (j.type == JointType::Revolute ? rodrigues(j.axis, q(i)) : slide_matrix(j.axis, q(i)));
  }
  M = M * homogeneous(c.tool());
  return (M * Eigen::Vector4d(point.x(), point.y(), point.z(), 1.0)).head<3>();
}

}  // namespace

TEST_CASE("fk_position: planar two-link examples") {
  const auto sys = single(planar_two_link());
  CHECK((fk_position(*sys, 0, Vector3::Zero(), vec({0, 0})) - Vector3(2, 0, 0)).norm() < 1e-15);
  CHECK((fk_position(*sys, 0, Vector3::Zero(), vec({kPi / 2, 0})) - Vector3(0, 2, 0)).norm() < 1e-15);
  CHECK((fk_position(*sys, 0, Vector3::Zero(), vec({0, kPi / 2})) - Vector3(1, 1, 0)).norm() < 1e-15);
}

TEST_CASE("fk_position matches a product-of-transforms oracle") {
  const SerialChain arm = spatial_arm();
  const auto sys = single(arm);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Vector q = random_vec(rng, arm.dof(), -2, 2);
    const Vector3 p = random_vec(rng, 3, -0.1, 0.1);
    CHECK((fk_position(*sys, 0, p, q) - oracle_position(arm, q, p)).norm() < 1e-12);
  }
}

TEST_CASE("frames, link samples and geometry_start") {
  const SerialChain c = planar_two_link();
  const auto fr = c.frames(vec({0, 0}));
  REQUIRE(fr.size() == 3);
  CHECK(fr[1].translation().isApprox(Vector3(1, 0, 0)));
  // Base and first joint coincide, so no midpoint is inserted between them.
  const auto samples = c.link_samples(vec({0, 0}));
  REQUIRE(samples.size() == 6);
  CHECK(samples.back().isApprox(Vector3(2, 0, 0)));
  CHECK(samples[4].isApprox(Vector3(1.5, 0, 0)));

  const SerialChain skip("skip", Isometry3::Identity(), c.joints(), c.tool(), 2);
  const auto trimmed = skip.link_samples(vec({0, 0}));
  CHECK(trimmed.front().isApprox(Vector3(1, 0, 0)));
  CHECK(trimmed.size() == 3);
}

TEST_CASE("multi-robot system stacks configurations") {
  const auto sys = std::make_shared<const MultiRobotSystem>(std::vector<SerialChain>{planar_two_link(), spatial_arm()});
  CHECK(sys->dof() == 6);
  CHECK(sys->offset(1) == 2);
  const Vector q = vec({0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  CHECK(sys->slice(q, 1) == vec({0.3, 0.4, 0.5, 0.6}));
  CHECK(sys->lower_limits().size() == 6);
  CHECK((fk_position(*sys, 1, Vector3::Zero(), q) - oracle_position(spatial_arm(), sys->slice(q, 1), Vector3::Zero()))
            .norm() < 1e-12);
  CHECK_THROWS_AS(fk_position(*sys, 2, Vector3::Zero(), q), std::invalid_argument);
  CHECK_THROWS_AS(fk_position(*sys, -1, Vector3::Zero(), q), std::invalid_argument);
  CHECK(link_sample_points(*sys, q).size() ==
        sys->chain(0).link_samples(sys->slice(q, 0)).size() + sys->chain(1).link_samples(sys->slice(q, 1)).size());
}

TEST_CASE("chain construction validates axes and limits") {
  Joint bad_axis = revolute(Vector3(1, 1, 0));
  CHECK_THROWS_AS(SerialChain("bad", Isometry3::Identity(), {bad_axis}), std::invalid_argument);
  Joint bad_limits = revolute(Vector3::UnitZ());
  bad_limits.lower = 1;
  bad_limits.upper = -1;
  CHECK_THROWS_AS(SerialChain("bad", Isometry3::Identity(), {bad_limits}), std::invalid_argument);
}

TEST_CASE("pick constraint: residual is x_g minus the end-effector point") {
  const auto sys = single(spatial_arm());
  const Vector3 x_g(0.3, 0.1, 0.4);
  const Manifold pick = pick_constraint(sys, 0, Vector3::Zero(), x_g);
  CHECK(pick.codim() == 3);
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const Vector q = random_vec(rng, 4, -1.5, 1.5);
    CHECK((pick.evaluate(q) - (x_g - fk_position(*sys, 0, Vector3::Zero(), q))).norm() < 1e-15);
  }
  const Vector q = vec({0.3, -0.2, 0.1, 0.5});
  const Manifold at_q = pick_constraint(sys, 0, Vector3::Zero(), fk_position(*sys, 0, Vector3::Zero(), q));
  CHECK(at_q.evaluate(q).norm() == 0.0);
}

TEST_CASE("pick constraint: projection acts as inverse kinematics") {
  const auto sys = single(spatial_arm());
  Rng rng(9);
  int solved = 0;
  for (int i = 0; i < 30; ++i) {
    const Vector q_ref = random_vec(rng, 4, -1, 1);
    const Vector3 x_g = fk_position(*sys, 0, Vector3::Zero(), q_ref);
    const Manifold pick = pick_constraint(sys, 0, Vector3::Zero(), x_g);
    const auto q = project(q_ref + random_vec(rng, 4, -0.2, 0.2), pick, 1e-5);
    if (!q) continue;
    ++solved;
    CHECK((x_g - fk_position(*sys, 0, Vector3::Zero(), *q)).norm() <= 1e-5);
  }
  CHECK(solved >= 25);
}

TEST_CASE("handover constraint: mirrored chains meeting at the midpoint") {
  Isometry3 right = translation(1, 0, 0);
  right.linear() = Eigen::AngleAxisd(kPi, Vector3::UnitZ()).toRotationMatrix();
  Joint lift;
  lift.type = JointType::Prismatic;
  lift.axis = Vector3::UnitZ();
  const SerialChain left_arm("left", translation(-1, 0, 0), {revolute(Vector3::UnitZ()), lift}, translation(1, 0, 0));
  const SerialChain right_arm("right", right, {revolute(Vector3::UnitZ()), lift}, translation(1, 0, 0));
  const auto sys = std::make_shared<const MultiRobotSystem>(std::vector<SerialChain>{left_arm, right_arm});
  const Manifold h12 = handover_constraint(sys, 0, Vector3::Zero(), 1, Vector3::Zero());
  const Manifold h21 = handover_constraint(sys, 1, Vector3::Zero(), 0, Vector3::Zero());
  CHECK(h12.codim() == 3);
  CHECK(h12.evaluate(vec({0, 0, 0, 0})).norm() < 1e-15);
  CHECK(h12.evaluate(vec({0, 0.2, 0, 0.2})).norm() < 1e-15);

  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Vector q = random_vec(rng, 4, -2, 2);
    CHECK((h12.evaluate(q) + h21.evaluate(q)).norm() < 1e-15);
  }
  const auto q = project(vec({0.6, 0.3, 0.1, -0.2}), h12, 1e-6);
  REQUIRE(q);
  CHECK((fk_position(*sys, 0, Vector3::Zero(), *q) - fk_position(*sys, 1, Vector3::Zero(), *q)).norm() <= 1e-6);
}

TEST_CASE("orientation constraint: tilt oracle") {
  const auto sys = single(SerialChain("tilt", Isometry3::Identity(), {revolute(Vector3::UnitX())}));
  const Manifold up = orientation_constraint(sys, 0);
  CHECK(up.codim() == 1);
  CHECK(up.evaluate(vec({0}))(0) == doctest::Approx(0.0));
  CHECK(up.evaluate(vec({kPi / 2}))(0) == doctest::Approx(-1.0));

  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const double theta = uniform(rng, -kPi, kPi);
    // Tilt angle from the rotation matrix, independent of the constraint code.
    const Eigen::Matrix3d R = rodrigues(Vector3::UnitX(), theta).topLeftCorner<3, 3>();
    const double tilt = std::acos(std::clamp(R(2, 2), -1.0, 1.0));
    CHECK(up.evaluate(vec({theta}))(0) == doctest::Approx(std::cos(tilt) - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("orientation residual stays within [-2, 0]") {
  const auto sys = single(spatial_arm());
  const Manifold up = orientation_constraint(sys, 0);
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const double h = up.evaluate(random_vec(rng, 4, -3, 3))(0);
    CHECK(h <= 1e-15);
    CHECK(h >= -2.0 - 1e-15);
  }
}

TEST_CASE("forward kinematics is Lipschitz on sampled perturbations") {
  const auto sys = single(spatial_arm());
  Rng rng(13);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Vector q = random_vec(rng, 4, -1, 1);
    const Vector dq = random_vec(rng, 4, -1e-4, 1e-4);
    const double ratio = (fk_position(*sys, 0, Vector3::Zero(), q + dq) - fk_position(*sys, 0, Vector3::Zero(), q)).norm() /
                         dq.norm();
    worst = std::max(worst, ratio);
  }
  // Total reach of the arm bounds the gain of every revolute joint; the slide has unit gain.
  CHECK(worst < 2.0);
}

TEST_CASE("kinematic constraint Jacobians agree with finite differences") {
  const auto sys = single(spatial_arm());
  const Manifold pick = pick_constraint(sys, 0, Vector3(0.01, 0, 0), Vector3(0.3, 0, 0.2));
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const Vector q = random_vec(rng, 4, -2, 2);
    CHECK((pick.jacobian(q) - fd_jacobian(pick, q, 1e-5)).cwiseAbs().maxCoeff() <= 1e-5);
  }
}
