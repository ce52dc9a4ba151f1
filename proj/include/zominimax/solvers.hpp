#ifndef ZOMINIMAX_SOLVERS_HPP
#define ZOMINIMAX_SOLVERS_HPP

#include "zominimax/geometry.hpp"
#include "zominimax/params.hpp"
#include "zominimax/problems.hpp"
#include "zominimax/smoothing.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace zominimax {

template <typename Scalar>
struct IterateRecord {
  std::uint64_t s = 0;
  Vector<Scalar> x;
  Vector<Scalar> y;
  OracleCounter counter;
};

/// Iterates (x_s, y_s) for s = 0..S with the counter after each iteration.
template <typename Scalar>
struct RunTrace {
  Mode mode = Mode::gda;
  DerivedParams params;
  std::uint64_t seed = 0;
  std::vector<IterateRecord<Scalar>> iterates;
  std::vector<double> stationarity_sq;  ///< filled by fill_stationarity()

  const OracleCounter& final_counter() const { return iterates.back().counter; }
};

template <typename Scalar>
struct RunOptions {
  /// Called after every inner ascent step (s, t, y_t) of the multi-step solvers.
  std::function<void(std::uint64_t, std::uint64_t, const Vector<Scalar>&)> inner_observer;
  double divergence_bound = 1e8;
};

namespace detail {

template <typename Scalar>
struct DeterministicOracle {
  const MinimaxProblem<Scalar>& problem;
  const DerivedParams& params;

  const ConstraintSet<Scalar>& set() const { return problem.set_y(); }
  Vector<Scalar> gx(const VectorArg<Scalar>& x, const VectorArg<Scalar>& y, Rng& rng, OracleCounter& c) const {
    return estimate_gx(problem, x, y, Scalar(params.mu1), params.q1, rng, c).vector;
  }
  Vector<Scalar> gy(const VectorArg<Scalar>& x, const VectorArg<Scalar>& y, Rng& rng, OracleCounter& c) const {
    return estimate_gy(problem, x, y, Scalar(params.mu2), params.q2, rng, c).vector;
  }
};

template <typename Scalar>
struct StochasticOracle {
  const StochasticWrapper<Scalar>& wrapper;
  const DerivedParams& params;

  const ConstraintSet<Scalar>& set() const { return wrapper.base.set_y(); }
  Vector<Scalar> gx(const VectorArg<Scalar>& x, const VectorArg<Scalar>& y, Rng& rng, OracleCounter& c) const {
    return estimate_gx_stochastic(wrapper, x, y, Scalar(params.mu1), params.m1.value(), rng, c).vector;
  }
  Vector<Scalar> gy(const VectorArg<Scalar>& x, const VectorArg<Scalar>& y, Rng& rng, OracleCounter& c) const {
    return estimate_gy_stochastic(wrapper, x, y, Scalar(params.mu2), params.m2.value(), rng, c).vector;
  }
};

inline void require_mode(const DerivedParams& p, Mode expected) {
  if (p.mode != expected)
    throw ConfigError("parameters derived for " + std::string(to_string(p.mode)) + " passed to the " +
                      std::string(to_string(expected)) + " solver");
  if (is_multistep(expected) && (!p.T || *p.T == 0)) throw ConfigError("multi-step solver needs T >= 1");
  if (is_stochastic(expected) && (!p.m1 || !p.m2 || *p.m1 == 0 || *p.m2 == 0))
    throw ConfigError("stochastic solver needs positive batch sizes m1 and m2");
}

template <typename Scalar>
RunTrace<Scalar> start_trace(const MinimaxProblem<Scalar>& problem, const DerivedParams& p,
                             const VectorArg<Scalar>& x0, const VectorArg<Scalar>& y0, std::uint64_t seed) {
  problem.check_x(x0);
  problem.check_y(y0);
  if (!contains(problem.set_y(), y0)) throw ConfigError("initial y is not feasible: " + format_point(y0));
  if (!x0.allFinite()) throw ConfigError("initial x is not finite");
  RunTrace<Scalar> trace;
  trace.mode = p.mode;
  trace.params = p;
  trace.seed = seed;
  trace.iterates.reserve(p.S + 1);
  trace.iterates.push_back({0, x0, y0, OracleCounter{}});
  return trace;
}

template <typename Scalar>
void guard(std::uint64_t s, const Vector<Scalar>& x, const Vector<Scalar>& y, double bound) {
  if (!x.allFinite() || !y.allFinite())
    throw NumericalError("non-finite iterate at iteration " + std::to_string(s));
  if (double(x.norm()) > bound)
    throw NumericalError("iterate diverged at iteration " + std::to_string(s) + ": |x| = " +
                         std::to_string(double(x.norm())));
}

// Simultaneous update: both estimates are taken at (x_s, y_s).
template <typename Scalar, typename Oracle>
RunTrace<Scalar> single_step_loop(const Oracle& oracle, const MinimaxProblem<Scalar>& problem,
                                  const DerivedParams& p, const VectorArg<Scalar>& x0, const VectorArg<Scalar>& y0,
                                  std::uint64_t seed, const RunOptions<Scalar>& opts) {
  auto trace = start_trace(problem, p, x0, y0, seed);
  Rng rng(seed);
  OracleCounter counter;
  Vector<Scalar> x = x0;
  Vector<Scalar> y = y0;
  const Scalar eta1(p.eta1), eta2(p.eta2);
  for (std::uint64_t s = 0; s < p.S; ++s) {
    const Vector<Scalar> gx = oracle.gx(x, y, rng, counter);
    const Vector<Scalar> gy = oracle.gy(x, y, rng, counter);
    x -= eta1 * gx;
    y = project(oracle.set(), Vector<Scalar>(y + eta2 * gy));
    guard(s + 1, x, y, opts.divergence_bound);
    trace.iterates.push_back({s + 1, x, y, counter});
  }
  return trace;
}

// T projected ascent steps warm-started at y_s, then one descent step at the new y.
template <typename Scalar, typename Oracle>
RunTrace<Scalar> multi_step_loop(const Oracle& oracle, const MinimaxProblem<Scalar>& problem,
                                 const DerivedParams& p, const VectorArg<Scalar>& x0, const VectorArg<Scalar>& y0,
                                 std::uint64_t seed, const RunOptions<Scalar>& opts) {
  if (!problem.set_y().bounded())
    throw ConfigError(std::string(to_string(p.mode)) + " requires a bounded constraint set");
  auto trace = start_trace(problem, p, x0, y0, seed);
  Rng rng(seed);
  OracleCounter counter;
  Vector<Scalar> x = x0;
  Vector<Scalar> y = y0;
  const Scalar eta1(p.eta1), eta2(p.eta2);
  const std::uint64_t inner = *p.T;
  for (std::uint64_t s = 0; s < p.S; ++s) {
    for (std::uint64_t t = 1; t <= inner; ++t) {
      const Vector<Scalar> gy = oracle.gy(x, y, rng, counter);
      y = project(oracle.set(), Vector<Scalar>(y + eta2 * gy));
      if (opts.inner_observer) opts.inner_observer(s, t, y);
    }
    x -= eta1 * oracle.gx(x, y, rng, counter);
    guard(s + 1, x, y, opts.divergence_bound);
    trace.iterates.push_back({s + 1, x, y, counter});
  }
  return trace;
}

}  // namespace detail

template <typename Scalar>
RunTrace<Scalar> run_zo_gda(const MinimaxProblem<Scalar>& problem, const DerivedParams& params,
                            const VectorArg<Scalar>& x0, const VectorArg<Scalar>& y0, std::uint64_t seed,
                            const RunOptions<Scalar>& opts = {}) {
  detail::require_mode(params, Mode::gda);
  return detail::single_step_loop(detail::DeterministicOracle<Scalar>{problem, params}, problem, params, x0, y0,
                                  seed, opts);
}

template <typename Scalar>
RunTrace<Scalar> run_zo_gdmsa(const MinimaxProblem<Scalar>& problem, const DerivedParams& params,
                              const VectorArg<Scalar>& x0, const VectorArg<Scalar>& y0, std::uint64_t seed,
                              const RunOptions<Scalar>& opts = {}) {
  detail::require_mode(params, Mode::gdmsa);
  return detail::multi_step_loop(detail::DeterministicOracle<Scalar>{problem, params}, problem, params, x0, y0,
                                 seed, opts);
}

template <typename Scalar>
RunTrace<Scalar> run_zo_sgda(const StochasticWrapper<Scalar>& wrapper, const DerivedParams& params,
                             const VectorArg<Scalar>& x0, const VectorArg<Scalar>& y0, std::uint64_t seed,
                             const RunOptions<Scalar>& opts = {}) {
  detail::require_mode(params, Mode::sgda);
  return detail::single_step_loop(detail::StochasticOracle<Scalar>{wrapper, params}, wrapper.base, params, x0,
                                  y0, seed, opts);
}

template <typename Scalar>
RunTrace<Scalar> run_zo_sgdmsa(const StochasticWrapper<Scalar>& wrapper, const DerivedParams& params,
                               const VectorArg<Scalar>& x0, const VectorArg<Scalar>& y0, std::uint64_t seed,
                               const RunOptions<Scalar>& opts = {}) {
  detail::require_mode(params, Mode::sgdmsa);
  return detail::multi_step_loop(detail::StochasticOracle<Scalar>{wrapper, params}, wrapper.base, params, x0,
                                 y0, seed, opts);
}

/// Dispatches on params.mode; deterministic modes query wrapper.base.
template <typename Scalar>
RunTrace<Scalar> run_solver(const StochasticWrapper<Scalar>& wrapper, const DerivedParams& params,
                            const VectorArg<Scalar>& x0, const VectorArg<Scalar>& y0, std::uint64_t seed,
                            const RunOptions<Scalar>& opts = {}) {
  switch (params.mode) {
    case Mode::gda: return run_zo_gda(wrapper.base, params, x0, y0, seed, opts);
    case Mode::gdmsa: return run_zo_gdmsa(wrapper.base, params, x0, y0, seed, opts);
    case Mode::sgda: return run_zo_sgda(wrapper, params, x0, y0, seed, opts);
    case Mode::sgdmsa: return run_zo_sgdmsa(wrapper, params, x0, y0, seed, opts);
  }
  throw ConfigError("unknown mode");
}

/// Closed-form sample totals for a schedule: {samples_x, samples_y}.
inline std::pair<std::uint64_t, std::uint64_t> expected_samples(const DerivedParams& p) {
  const std::uint64_t bx = p.x_batch();
  const std::uint64_t by = p.y_batch();
  const std::uint64_t inner = is_multistep(p.mode) ? p.T.value() : 1;
  return {p.S * bx, p.S * inner * by};
}

/// Closed-form raw evaluation total: deterministic batches share one base value,
/// stochastic samples evaluate both points.
inline std::uint64_t expected_raw_evals(const DerivedParams& p) {
  const auto [sx, sy] = expected_samples(p);
  if (is_stochastic(p.mode)) return 2 * (sx + sy);
  const std::uint64_t inner = is_multistep(p.mode) ? p.T.value() : 1;
  return sx + sy + p.S * (1 + inner);
}

}  // namespace zominimax

#endif  // ZOMINIMAX_SOLVERS_HPP
