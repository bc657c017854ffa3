#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "psm/steering.hpp"

using namespace psm;
using psm::test::random_vec;
using psm::test::vec;

namespace {

Manifold plane(const Vector& normal, double offset) {
  Matrix A = normal.transpose();
  return manifolds::linear(A, vec({offset}));
}

Configuration on_manifold(const Manifold& m, Rng& rng, double lo, double hi) {
  for (;;) {
    auto q = project(random_vec(rng, m.ambient_dim(), lo, hi), m, 1e-12);
    if (q) return *q;
  }
}

}  // namespace

TEST_CASE("steer_point: spec examples") {
  const Manifold cyl = manifolds::cylinder(0.25, -1.0);
  const Vector d = steer_point(vec({2, 0, 0}), vec({3, 1, 1}), cyl);
  CHECK((d - vec({0, 1, 1})).norm() < 1e-12);
  CHECK(steer_point(vec({2, 0, 0}), vec({2, 0, 0}), cyl).norm() == 0.0);
}

TEST_CASE("steer_point: tangent, contracting and idempotent") {
  const Manifold par = manifolds::paraboloid(0.1, 2.0);
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    const Configuration q = on_manifold(par, rng, -4, 4);
    const Vector q_rand = random_vec(rng, 3, -6, 6);
    const Vector d = steer_point(q, q_rand, par);
    CHECK((par.jacobian(q) * d).norm() <= 1e-8);
    CHECK(d.norm() <= (q_rand - q).norm() + 1e-12);
    CHECK((steer_point(q, q + d, par) - d).norm() <= 1e-10);
  }
}

TEST_CASE("steer_constraint: spec examples") {
  const Manifold floor = plane(vec({0, 0, 1}), 0.0);
  const Manifold wall = plane(vec({1, 0, 0}), 1.0);
  const Vector d = steer_constraint(vec({0, 0, 0}), floor, wall);
  REQUIRE(d.norm() > 0.1);
  CHECK((d.normalized() - vec({1, 0, 0})).norm() < 1e-12);
  CHECK((d - vec({1, 0, 0})).norm() < 1e-12);  // Gauss-Newton step lands on the wall
  CHECK(steer_constraint(vec({1, 2, 0}), floor, wall).norm() < 1e-12);
}

TEST_CASE("steer_constraint: tangent descent matching a tangent-space grid search") {
  const Manifold cyl = manifolds::cylinder(0.25, -1.0);
  const Manifold par = manifolds::paraboloid(0.1, 2.0);
  Rng rng(42);
  for (int i = 0; i < 40; ++i) {
    const Configuration q = on_manifold(cyl, rng, -4, 4);
    const Vector d = steer_constraint(q, cyl, par);
    const Matrix Jc = cyl.jacobian(q), Jn = par.jacobian(q);
    const Vector h = par.evaluate(q);
    CHECK((Jc * d).norm() <= 1e-8);
    CHECK(h.dot(Jn * d) <= 1e-12);

    // Linearized objective over a dense grid of tangent steps w (d = B w).
    const Matrix B = tangent_nullspace(cyl, q);
    REQUIRE(B.cols() == 2);
    auto objective = [&](const Vector& step) { return (h + Jn * step).squaredNorm(); };
    const double radius = 2.0 * std::max(1.0, d.norm());
    double grid_best = objective(Vector::Zero(3));
    Vector best_dir = Vector::Zero(3);
    for (int a = -200; a <= 200; ++a)
      for (int b = -200; b <= 200; ++b) {
        const Vector step = B * vec({radius * a / 200.0, radius * b / 200.0});
        const double f = objective(step);
        if (f < grid_best) {
          grid_best = f;
          best_dir = step;
        }
      }
    CHECK(objective(d) <= grid_best + 1e-9);

    // First-order decrease of the true residual along d.
    if (h.norm() > 1e-6 && d.norm() > 1e-9) {
      const double t = 1e-4 / d.norm();
      CHECK(par.evaluate(q + t * d).norm() < h.norm());
      // The grid's best direction agrees with d in sign of progress.
      if (best_dir.norm() > 0) CHECK(best_dir.dot(Jn.transpose() * h) <= 1e-12);
    }
  }
}

TEST_CASE("psm_steer: constraint branch on orthogonal planes") {
  const ManifoldPair pair(plane(vec({0, 0, 1}), 0.0), plane(vec({1, 0, 0}), 1.0));
  SteerParams p;
  p.alpha = 0.5;
  p.beta = 1.0;
  p.r = 0.5;  // every threshold is below the residual 0.5 at q_step
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    const SteerOutcome out = psm_steer(p, vec({0, 0, 0}), vec({0, 3, 0}), pair, ProjectionOptions{1e-6}, rng);
    CHECK(out.used_constraint);
    CHECK_FALSE(out.intersection_projection);
    REQUIRE(out.q);
    CHECK((*out.q - vec({0.5, 0, 0})).norm() < 1e-15);
  }
}

TEST_CASE("psm_steer: step length, postconditions and draw count") {
  const ManifoldPair pair(manifolds::paraboloid(0.1, 2.0), manifolds::cylinder(0.25, -1.0));
  SteerParams p;
  p.beta = 0.3;
  const ProjectionOptions opts{0.01};
  Rng rng(44), sampler(45);
  int constraint = 0, intersections = 0;
  for (int i = 0; i < 500; ++i) {
    const Configuration q_near = on_manifold(pair.current, sampler, -5, 5);
    const Vector q_rand = random_vec(sampler, 3, -6, 6);
    Rng expected = rng;
    expected.discard(2);
    const SteerOutcome out = psm_steer(p, q_near, q_rand, pair, opts, rng);
    CHECK(rng == expected);
    constraint += out.used_constraint;
    if (out.q_step.size() == 3) CHECK((out.q_step - q_near).norm() == doctest::Approx(p.alpha).epsilon(1e-14));
    if (!out.q) continue;
    if (out.intersection_projection) {
      ++intersections;
      CHECK(pair.intersection.evaluate(*out.q).norm() <= opts.eps);
    } else {
      CHECK(pair.current.evaluate(*out.q).norm() <= opts.eps);
    }
  }
  CHECK(constraint > 100);
  CHECK(constraint < 200);
  CHECK(intersections > 0);
}

TEST_CASE("psm_steer: beta = 0 never selects constraint steering") {
  const ManifoldPair pair(manifolds::paraboloid(0.1, 2.0), manifolds::cylinder(0.25, -1.0));
  SteerParams p;
  p.beta = 0.0;
  Rng rng(46);
  for (int i = 0; i < 1000; ++i)
    CHECK_FALSE(psm_steer(p, vec({3.5, 3.5, 4.45}), random_vec(rng, 3, -6, 6), pair, ProjectionOptions{}, rng)
                    .used_constraint);
}

TEST_CASE("psm_steer: zero direction is discarded") {
  const ManifoldPair pair(manifolds::cylinder(0.25, -1.0), manifolds::paraboloid(0.1, 2.0));
  SteerParams p;
  p.beta = 0.0;
  Rng rng(47);
  const SteerOutcome out = psm_steer(p, vec({2, 0, 0}), vec({3, 0, 0}), pair, ProjectionOptions{}, rng);
  CHECK_FALSE(out.q);
  CHECK(out.q_step.size() == 0);
}

TEST_CASE("psm_steer: intersection projection frequency is (r - c) / r") {
  const double r = 1.5;
  for (double c : {0.2, 0.75, 1.2}) {
    CAPTURE(c);
    // q_step = (1, 0, 0) lies at residual distance c from the plane x = 1 + c.
    const ManifoldPair pair(plane(vec({0, 0, 1}), 0.0), plane(vec({1, 0, 0}), 1.0 + c));
    SteerParams p;
    p.alpha = 1.0;
    p.beta = 0.0;
    p.r = r;
    Rng rng(48);
    const int trials = 10000;
    int hits = 0;
    for (int i = 0; i < trials; ++i)
      hits += psm_steer(p, vec({0, 0, 0}), vec({2, 0, 0}), pair, ProjectionOptions{1e-9}, rng).intersection_projection;
    const double prob = (r - c) / r;
    const double sigma = std::sqrt(prob * (1 - prob) / trials);
    CHECK(std::abs(double(hits) / trials - prob) <= 3 * sigma);
  }
}

TEST_CASE("steer params validation") {
  CHECK_THROWS_AS((SteerParams{0.0, 0.1, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SteerParams{1.0, 1.1, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SteerParams{1.0, 0.1, 0.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((SteerParams{1.0, 0.1, 1.5}.validate()));
}
