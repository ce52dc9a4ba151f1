#include "zominimax/geometry.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace zominimax;
using namespace zominimax::testing;

TEST_CASE("ball projection scales exterior points radially") {
  const auto ball = ConstraintSet<double>::ball(2, 1.0);
  CHECK(project(ball, vec({2, 0})).isApprox(vec({1, 0})));
  CHECK(project(ball, vec({0.3, 0.4})) == vec({0.3, 0.4}));
}

TEST_CASE("box projection clamps componentwise") {
  const auto box = ConstraintSet<double>::box(vec({-1, -1}), vec({1, 1}));
  CHECK(project(box, vec({2, -3})) == vec({1, -1}));
}

TEST_CASE("diameter") {
  CHECK(*diameter(ConstraintSet<double>::ball(vec({5, -2, 1}), 0.5)) == doctest::Approx(1.0));
  CHECK(*diameter(ConstraintSet<double>::box(vec({0, 0}), vec({3, 4}))) == doctest::Approx(5.0));
  CHECK_FALSE(diameter(ConstraintSet<double>::whole(7)).has_value());
  CHECK_FALSE(ConstraintSet<double>::whole(7).bounded());
}

TEST_CASE("invalid sets and dimension mismatch are rejected") {
  CHECK_THROWS_AS(ConstraintSet<double>::ball(2, 0.0), ConfigError);
  CHECK_THROWS_AS(ConstraintSet<double>::box(vec({0, 1}), vec({1, 0})), ConfigError);
  CHECK_THROWS_AS(ConstraintSet<double>::whole(0), ConfigError);
  const auto ball = ConstraintSet<double>::ball(2, 1.0);
  CHECK_THROWS_AS(project(ball, vec({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("projection properties over random sets and points") {
  Rng rng(11);
  std::uniform_real_distribution<double> unif(0.1, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index d = 1 + trial % 5;
    std::vector<ConstraintSet<double>> sets;
    sets.push_back(ConstraintSet<double>::ball(standard_normal<double>(d, rng), unif(rng)));
    VectorXd lo = standard_normal<double>(d, rng);
    VectorXd width(d);
    for (Eigen::Index i = 0; i < d; ++i) width[i] = unif(rng);
    sets.push_back(ConstraintSet<double>::box(lo, lo + width));
    sets.push_back(ConstraintSet<double>::whole(d));

    for (const auto& set : sets) {
      for (int k = 0; k < 20; ++k) {
        const VectorXd a = 3.0 * standard_normal<double>(d, rng);
        const VectorXd b = 3.0 * standard_normal<double>(d, rng);
        const VectorXd pa = project(set, a);
        const VectorXd pb = project(set, b);
        CHECK((project(set, pa) - pa).norm() <= 1e-12);
        CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
        CHECK(contains(set, pa));
        // Any feasible q is at least as far from a as the projection.
        const VectorXd q = project(set, VectorXd(3.0 * standard_normal<double>(d, rng)));
        CHECK((a - pa).norm() <= (a - q).norm() + 1e-12);
      }
    }
  }
}

TEST_CASE("geometry is generic over the scalar type") {
  using VectorF = Vector<float>;
  const auto ball = ConstraintSet<float>::ball(VectorF::Zero(2), 2.0f);
  VectorF p(2);
  p << 4.0f, 0.0f;
  CHECK(project(ball, p)[0] == doctest::Approx(2.0f));
  CHECK(*diameter(ball) == doctest::Approx(4.0f));
}
