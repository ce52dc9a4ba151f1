#ifndef ZOMINIMAX_TESTS_TEST_UTIL_HPP
#define ZOMINIMAX_TESTS_TEST_UTIL_HPP

#include "zominimax/problems.hpp"

#include <Eigen/Dense>

namespace zominimax::testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double e : v) out[i++] = e;
  return out;
}

inline MinimaxProblem<double> quadratic(MatrixXd A, MatrixXd B, double tau, ConstraintSet<double> set) {
  return MinimaxProblem<double>(QuadraticSaddle<double>{std::move(A), std::move(B)}, tau, std::move(set));
}

inline MinimaxProblem<double> trig(VectorXd a, MatrixXd B, double tau, ConstraintSet<double> set) {
  return MinimaxProblem<double>(TrigSaddle<double>{std::move(a), std::move(B)}, tau, std::move(set));
}

inline MinimaxProblem<double> fixture(FamilyKind family, double kappa = 2.0, std::uint64_t seed = 3,
                                      double radius = 1.0, double coupling = 0.5, Eigen::Index d1 = 4,
                                      Eigen::Index d2 = 3) {
  FixtureSpec<double> spec;
  spec.family = family;
  spec.d1 = d1;
  spec.d2 = d2;
  spec.kappa = kappa;
  spec.coupling = coupling;
  spec.seed = seed;
  return make_fixture(spec, ConstraintSet<double>::ball(d2, radius));
}

/// Uniform point in the ball of given radius.
inline VectorXd random_in_ball(Eigen::Index d, double radius, Rng& rng) {
  VectorXd u = standard_normal<double>(d, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return u.normalized() * radius * std::pow(unif(rng), 1.0 / double(d));
}

}  // namespace zominimax::testing

#endif
