#ifndef ZOMINIMAX_SMOOTHING_HPP
#define ZOMINIMAX_SMOOTHING_HPP

#include "zominimax/core.hpp"
#include "zominimax/problems.hpp"

#include <cmath>
#include <cstdint>

namespace zominimax {

struct SmoothingConfig {
  double mu1 = 1e-3;
  double mu2 = 1e-3;
  std::uint64_t q1 = 1;
  std::uint64_t q2 = 1;
  std::uint64_t m1 = 1;
  std::uint64_t m2 = 1;
};

template <typename Scalar>
struct GradientEstimate {
  Vector<Scalar> vector;
  std::uint64_t samples_used = 0;
};

namespace detail {

inline void check_estimator_args(double mu, std::uint64_t batch) {
  if (!(mu > 0.0)) throw ConfigError("smoothing radius must be positive");
  if (batch == 0) throw ConfigError("mini-batch size must be at least 1");
}

template <typename Scalar>
Scalar checked(Scalar v, const VectorArg<Scalar>& x, const VectorArg<Scalar>& y) {
  if (!std::isfinite(v))
    throw NumericalError("non-finite function value at x=" + format_point(x) + ", y=" + format_point(y));
  return v;
}

// Averages (f(p + mu u) - f(p)) / mu * u over `batch` directions, with one shared base value.
template <typename Scalar, typename Eval>
Vector<Scalar> deterministic_batch(const Vector<Scalar>& p, Scalar mu, std::uint64_t batch, Rng& rng,
                                   Eval&& eval_at) {
  const Scalar base = eval_at(p);
  Vector<Scalar> acc = Vector<Scalar>::Zero(p.size());
  Vector<Scalar> shifted(p.size());
  for (std::uint64_t i = 0; i < batch; ++i) {
    const Vector<Scalar> u = standard_normal<Scalar>(p.size(), rng);
    shifted = p + mu * u;
    acc += ((eval_at(shifted) - base) / mu) * u;
  }
  return acc / Scalar(batch);
}

// Each sample draws (u_i, xi_i) and evaluates both points under the same xi_i.
template <typename Scalar, typename Eval>
Vector<Scalar> stochastic_batch(const StochasticWrapper<Scalar>& w, const Vector<Scalar>& p, Scalar mu,
                                std::uint64_t batch, Rng& rng, Eval&& eval_at) {
  Vector<Scalar> acc = Vector<Scalar>::Zero(p.size());
  Vector<Scalar> shifted(p.size());
  for (std::uint64_t i = 0; i < batch; ++i) {
    const Vector<Scalar> u = standard_normal<Scalar>(p.size(), rng);
    const NoiseDraw<Scalar> xi = draw_noise(w, rng);
    shifted = p + mu * u;
    const Scalar hi = eval_at(shifted, xi);
    const Scalar lo = eval_at(p, xi);
    acc += ((hi - lo) / mu) * u;
  }
  return acc / Scalar(batch);
}

}  // namespace detail

/// Mini-batch Gaussian-smoothing estimate of grad_x f using q1 directions.
template <typename Scalar>
GradientEstimate<Scalar> estimate_gx(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x,
                                     const VectorArg<Scalar>& y, std::type_identity_t<Scalar> mu1,
                                     std::uint64_t q1, Rng& rng, OracleCounter& counter) {
  detail::check_estimator_args(double(mu1), q1);
  auto f = [&](const Vector<Scalar>& xp) { return detail::checked(eval(problem, xp, y, counter), xp, y); };
  GradientEstimate<Scalar> est{detail::deterministic_batch<Scalar>(x, mu1, q1, rng, f), q1};
  counter.samples_x += q1;
  return est;
}

/// Mini-batch estimate of grad_y f using q2 directions.
template <typename Scalar>
GradientEstimate<Scalar> estimate_gy(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x,
                                     const VectorArg<Scalar>& y, std::type_identity_t<Scalar> mu2,
                                     std::uint64_t q2, Rng& rng, OracleCounter& counter) {
  detail::check_estimator_args(double(mu2), q2);
  auto f = [&](const Vector<Scalar>& yp) { return detail::checked(eval(problem, x, yp, counter), x, yp); };
  GradientEstimate<Scalar> est{detail::deterministic_batch<Scalar>(y, mu2, q2, rng, f), q2};
  counter.samples_y += q2;
  return est;
}

template <typename Scalar>
GradientEstimate<Scalar> estimate_gx_stochastic(const StochasticWrapper<Scalar>& w, const VectorArg<Scalar>& x,
                                                const VectorArg<Scalar>& y, std::type_identity_t<Scalar> mu1,
                                                std::uint64_t m1, Rng& rng, OracleCounter& counter) {
  detail::check_estimator_args(double(mu1), m1);
  auto f = [&](const Vector<Scalar>& xp, const NoiseDraw<Scalar>& xi) {
    return detail::checked(eval_with_noise(w, xp, y, xi, counter), xp, y);
  };
  GradientEstimate<Scalar> est{detail::stochastic_batch<Scalar>(w, x, mu1, m1, rng, f), m1};
  counter.samples_x += m1;
  return est;
}

template <typename Scalar>
GradientEstimate<Scalar> estimate_gy_stochastic(const StochasticWrapper<Scalar>& w, const VectorArg<Scalar>& x,
                                                const VectorArg<Scalar>& y, std::type_identity_t<Scalar> mu2,
                                                std::uint64_t m2, Rng& rng, OracleCounter& counter) {
  detail::check_estimator_args(double(mu2), m2);
  auto f = [&](const Vector<Scalar>& yp, const NoiseDraw<Scalar>& xi) {
    return detail::checked(eval_with_noise(w, x, yp, xi, counter), x, yp);
  };
  GradientEstimate<Scalar> est{detail::stochastic_batch<Scalar>(w, y, mu2, m2, rng, f), m2};
  counter.samples_y += m2;
  return est;
}

// Closed-form Gaussian smoothings of the fixtures.
//   x-block: quadratic adds mu^2 tr(A)/2; cosines are damped by exp(-mu^2/2).
//   y-block: both families subtract tau mu^2 d2 / 2, gradient unchanged.

template <typename Scalar>
Scalar smoothed_value_x(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x, const VectorArg<Scalar>& y,
                        std::type_identity_t<Scalar> mu1) {
  const Scalar coupled = x.dot(problem.coupling() * y) - Scalar(0.5) * problem.tau() * y.squaredNorm();
  return std::visit(
      [&](const auto& fam) -> Scalar {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, QuadraticSaddle<Scalar>>)
          return Scalar(0.5) * x.dot(fam.A * x) + Scalar(0.5) * mu1 * mu1 * fam.A.trace() + coupled;
        else
          return std::exp(-mu1 * mu1 / Scalar(2)) * fam.amplitudes.dot(x.array().cos().matrix()) + coupled;
      },
      problem.family());
}

/// Exact f_{mu1}(x, y) = E f(x + mu1 u, y).
template <typename Scalar>
Scalar smoothed_value_reference(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x,
                                const VectorArg<Scalar>& y, std::type_identity_t<Scalar> mu1) {
  return smoothed_value_x(problem, x, y, mu1);
}

template <typename Scalar>
Vector<Scalar> smoothed_grad_x(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x,
                               const VectorArg<Scalar>& y, std::type_identity_t<Scalar> mu1) {
  return std::visit(
      [&](const auto& fam) -> Vector<Scalar> {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, QuadraticSaddle<Scalar>>) {
          return problem.grad_x(x, y);
        } else {
          Vector<Scalar> g = problem.coupling() * y;
          g.array() -= std::exp(-mu1 * mu1 / Scalar(2)) * fam.amplitudes.array() * x.array().sin();
          return g;
        }
      },
      problem.family());
}

template <typename Scalar>
Scalar smoothed_value_y(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x, const VectorArg<Scalar>& y,
                        std::type_identity_t<Scalar> mu2) {
  return problem.value(x, y) - Scalar(0.5) * problem.tau() * mu2 * mu2 * Scalar(problem.d2());
}

template <typename Scalar>
Vector<Scalar> smoothed_grad_y(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x,
                               const VectorArg<Scalar>& y, std::type_identity_t<Scalar> /*mu2*/) {
  return problem.grad_y(x, y);
}

/// Moment and bias bounds for the Gaussian-smoothing estimators in a block of dimension d.
namespace bounds {

inline double gradient_bias_sq(double mu, double ell, double d) {
  return mu * mu / 4.0 * ell * ell * std::pow(d + 3.0, 3);
}

inline double value_gap(double mu, double ell, double d) { return mu * mu / 2.0 * ell * d; }

inline double single_second_moment(double grad_sq, double mu, double ell, double d) {
  return 2.0 * (d + 4.0) * grad_sq + mu * mu * ell * ell * std::pow(d + 6.0, 3) / 2.0;
}

inline double stochastic_single_second_moment(double grad_sq, double sigma, double mu, double ell, double d) {
  return mu * mu * ell * ell / 2.0 * std::pow(d + 6.0, 3) + 2.0 * (grad_sq + sigma * sigma) * (d + 4.0);
}

/// Valid at batch size 2(d+6).
inline double batch_second_moment(double grad_sq, double mu, double ell, double d) {
  return 3.0 * grad_sq + mu * mu * ell * ell * std::pow(d + 6.0, 3);
}

inline double stochastic_residual(double eps, double mu, double ell, double d) {
  return eps * eps / 2.0 + mu * mu * ell * ell * std::pow(d + 3.0, 3) / 2.0 +
         mu * mu * ell * ell * std::pow(d + 6.0, 2) * eps * eps / 8.0;
}

/// Valid at batch size 4(d+6)(sigma^2+1)/eps^2.
inline double stochastic_batch_second_moment(double grad_sq, double eps, double mu, double ell, double d) {
  return 3.0 * grad_sq + stochastic_residual(eps, mu, ell, d);
}

}  // namespace bounds

}  // namespace zominimax

#endif  // ZOMINIMAX_SMOOTHING_HPP
