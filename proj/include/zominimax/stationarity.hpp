#ifndef ZOMINIMAX_STATIONARITY_HPP
#define ZOMINIMAX_STATIONARITY_HPP

#include "zominimax/params.hpp"
#include "zominimax/problems.hpp"
#include "zominimax/smoothing.hpp"
#include "zominimax/solvers.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>

namespace zominimax {

enum class MeasureMethod { automatic, analytic, inner_solve };

inline std::string_view to_string(MeasureMethod m) noexcept {
  switch (m) {
    case MeasureMethod::automatic: return "automatic";
    case MeasureMethod::analytic: return "analytic";
    case MeasureMethod::inner_solve: return "inner-solve";
  }
  return "?";
}

template <typename Scalar>
struct StationaryPair {
  Vector<Scalar> x;
  Vector<Scalar> y;
  double grad_fx_sq = 0.0;
  double grad_fy_sq = 0.0;
  double grad_mapping_y_sq = 0.0;  ///< projected-gradient residual of the y-block
};

template <typename Scalar>
struct StationarityReport {
  double grad_g_sq = 0.0;
  MeasureMethod method = MeasureMethod::analytic;
  std::uint64_t inner_iters_used = 0;
  std::optional<StationaryPair<Scalar>> pair;

  // Populated by recover_pair only.
  bool stochastic = false;
  std::uint64_t budget = 0;
  std::uint64_t samples_charged = 0;
  bool warning = false;
};

template <typename Scalar>
struct InnerSolution {
  Vector<Scalar> y;
  std::uint64_t iterations = 0;
};

/// First-order projected ascent on grad_y f with step 1/ell, stopped at relative
/// step length `tol`. Verification-only: never touches an OracleCounter.
template <typename Scalar>
InnerSolution<Scalar> inner_solve(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x,
                                  double tol = 1e-10, std::uint64_t max_iters = 1'000'000) {
  problem.check_x(x);
  const Scalar step = Scalar(1) / problem.ell();
  Vector<Scalar> y = project(problem.set_y(), Vector<Scalar>::Zero(problem.d2()));
  for (std::uint64_t k = 1; k <= max_iters; ++k) {
    Vector<Scalar> next = project(problem.set_y(), Vector<Scalar>(y + step * problem.grad_y(x, y)));
    const double delta = double((next - y).norm());
    y = std::move(next);
    if (delta <= tol * std::max(1.0, double(y.norm()))) return {y, k};
  }
  throw NumericalError("inner maximization did not converge within " + std::to_string(max_iters) +
                       " iterations; check tau");
}

/// |grad g(x)|^2 with g(x) = f(x, y*(x)).
template <typename Scalar>
StationarityReport<Scalar> measure_grad_g(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x,
                                          MeasureMethod method = MeasureMethod::automatic) {
  StationarityReport<Scalar> r;
  if (method == MeasureMethod::inner_solve) {
    const auto sol = inner_solve(problem, x);
    r.grad_g_sq = double(problem.grad_x(x, sol.y).squaredNorm());
    r.method = MeasureMethod::inner_solve;
    r.inner_iters_used = sol.iterations;
    return r;
  }
  r.grad_g_sq = double(analytic_grad_g(problem, x).squaredNorm());
  r.method = MeasureMethod::analytic;
  return r;
}

/// g(x) through the first-order inner solve.
template <typename Scalar>
Scalar g_by_inner_solve(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& x) {
  return problem.value(x, inner_solve(problem, x, 1e-14).y);
}

template <typename Scalar>
void fill_stationarity(RunTrace<Scalar>& trace, const MinimaxProblem<Scalar>& problem) {
  trace.stationarity_sq.clear();
  trace.stationarity_sq.reserve(trace.iterates.size());
  for (const auto& it : trace.iterates) trace.stationarity_sq.push_back(measure_grad_g(problem, it.x).grad_g_sq);
}

/// Index of the smallest measured |grad g|^2, ties to the earliest iterate.
template <typename Scalar>
std::size_t best_iterate(const RunTrace<Scalar>& trace) {
  if (trace.stationarity_sq.empty()) throw ConfigError("trace has no stationarity measurements");
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.stationarity_sq.size(); ++i)
    if (trace.stationarity_sq[i] < trace.stationarity_sq[best]) best = i;
  return best;
}

struct RecoveryOptions {
  double C_budget = 1.0;
  double C_mu = 1.0;
};

namespace detail {

template <typename Scalar, typename Estimate>
StationarityReport<Scalar> recover_with(const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& xbar,
                                        const VectorArg<Scalar>& y_start, double eps, std::uint64_t budget,
                                        std::uint64_t batch, Estimate&& estimate_gy,
                                        const std::function<void(std::uint64_t, const Vector<Scalar>&)>& observer) {
  problem.check_x(xbar);
  problem.check_y(y_start);
  if (!contains(problem.set_y(), y_start)) throw ConfigError("recovery start y is not feasible");
  const Scalar eta2 = Scalar(1) / (Scalar(6) * problem.ell());
  const std::uint64_t max_steps = std::max<std::uint64_t>(1, (budget + batch - 1) / batch);

  StationarityReport<Scalar> r;
  r.budget = budget;
  Vector<Scalar> y = y_start;
  // Each probe estimates the y-gradient; a small estimated gradient mapping ends the ascent.
  for (std::uint64_t step = 0; step < max_steps; ++step) {
    const Vector<Scalar> h = estimate_gy(y);
    r.samples_charged += batch;
    const Vector<Scalar> next = project(problem.set_y(), Vector<Scalar>(y + eta2 * h));
    const double mapping_sq = double(((next - y) / eta2).squaredNorm());
    if (mapping_sq <= eps * eps / 4.0) break;
    y = next;
    ++r.inner_iters_used;
    if (observer) observer(r.inner_iters_used, y);
  }

  StationaryPair<Scalar> pair;
  pair.x = xbar;
  pair.y = y;
  pair.grad_fx_sq = double(problem.grad_x(xbar, y).squaredNorm());
  const Vector<Scalar> gy = problem.grad_y(xbar, y);
  pair.grad_fy_sq = double(gy.squaredNorm());
  const Vector<Scalar> mapped = project(problem.set_y(), Vector<Scalar>(y + eta2 * gy));
  pair.grad_mapping_y_sq = double(((mapped - y) / eta2).squaredNorm());
  r.warning = pair.grad_fy_sq > eps * eps;
  r.grad_g_sq = measure_grad_g(problem, xbar).grad_g_sq;
  r.pair = std::move(pair);
  return r;
}

}  // namespace detail

/// Deterministic zeroth-order sample budget ceil(C kappa d2 ln(1/eps)).
inline std::uint64_t recovery_budget_deterministic(double kappa, std::int64_t d2, double eps, double C = 1.0) {
  return ceil_count(C * kappa * double(d2) * std::log(1.0 / eps));
}

/// Stochastic zeroth-order sample budget ceil(C d2 / eps^2).
inline std::uint64_t recovery_budget_stochastic(std::int64_t d2, double eps, double C = 1.0) {
  return ceil_count(C * double(d2) / (eps * eps));
}

/// Turns an eps-stationary x into an eps-stationary pair by zeroth-order ascent on y.
/// Samples are charged to `counter`.
template <typename Scalar>
StationarityReport<Scalar> recover_pair(
    const MinimaxProblem<Scalar>& problem, const VectorArg<Scalar>& xbar, const VectorArg<Scalar>& y_start, double eps,
    Rng& rng, OracleCounter& counter, const RecoveryOptions& opts = {},
    const std::type_identity_t<std::function<void(std::uint64_t, const Vector<Scalar>&)>>& observer = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  const double kappa = double(problem.kappa());
  const Scalar mu2 = Scalar(opts.C_mu * eps * std::pow(double(problem.d2()), -1.5) / std::sqrt(kappa));
  const std::uint64_t batch = deterministic_batch(problem.d2());
  const std::uint64_t budget = recovery_budget_deterministic(kappa, problem.d2(), eps, opts.C_budget);
  auto est = [&](const VectorArg<Scalar>& y) { return estimate_gy(problem, xbar, y, mu2, batch, rng, counter).vector; };
  auto r = detail::recover_with(problem, xbar, y_start, eps, budget, batch, est, observer);
  r.stochastic = false;
  return r;
}

template <typename Scalar>
StationarityReport<Scalar> recover_pair(
    const StochasticWrapper<Scalar>& wrapper, const VectorArg<Scalar>& xbar, const VectorArg<Scalar>& y_start,
    double eps, Rng& rng, OracleCounter& counter, const RecoveryOptions& opts = {},
    const std::type_identity_t<std::function<void(std::uint64_t, const Vector<Scalar>&)>>& observer = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  const auto& problem = wrapper.base;
  const double kappa = double(problem.kappa());
  const Scalar mu2 = Scalar(opts.C_mu * eps * std::pow(double(problem.d2()), -1.5) / std::sqrt(kappa));
  const std::uint64_t batch = stochastic_batch(problem.d2(), double(wrapper.sigma2), eps);
  const std::uint64_t budget = recovery_budget_stochastic(problem.d2(), eps, opts.C_budget);
  auto est = [&](const VectorArg<Scalar>& y) {
    return estimate_gy_stochastic(wrapper, xbar, y, mu2, batch, rng, counter).vector;
  };
  auto r = detail::recover_with(problem, xbar, y_start, eps, budget, batch, est, observer);
  r.stochastic = true;
  return r;
}

}  // namespace zominimax

#endif  // ZOMINIMAX_STATIONARITY_HPP
