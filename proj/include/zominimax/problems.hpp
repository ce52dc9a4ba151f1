#ifndef ZOMINIMAX_PROBLEMS_HPP
#define ZOMINIMAX_PROBLEMS_HPP

#include "zominimax/core.hpp"
#include "zominimax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>

namespace zominimax {

/// f(x,y) = 1/2 x'Ax + x'By - (tau/2)|y|^2 with A symmetric.
template <typename Scalar>
struct QuadraticSaddle {
  Matrix<Scalar> A;
  Matrix<Scalar> B;
};

/// f(x,y) = sum_i a_i cos(x_i) + x'By - (tau/2)|y|^2, nonconvex in x.
template <typename Scalar>
struct TrigSaddle {
  Vector<Scalar> amplitudes;
  Matrix<Scalar> B;
};

/// Zeroth-order oracle bookkeeping, scoped to one run.
///
/// samples_x / samples_y count estimator samples (one Gaussian direction with its
/// paired evaluations); raw_evals counts individual function evaluations.
struct OracleCounter {
  std::uint64_t samples_x = 0;
  std::uint64_t samples_y = 0;
  std::uint64_t raw_evals = 0;

  std::uint64_t samples() const noexcept { return samples_x + samples_y; }
  friend bool operator==(const OracleCounter&, const OracleCounter&) = default;
};

template <typename Scalar>
Scalar spectral_norm(const Matrix<Scalar>& m) {
  if (m.size() == 0) return Scalar(0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
  return svd.singularValues()(0);
}

/// Smooth minimax objective, concave quadratic in y with modulus tau.
///
/// Both families share the spherical y-part, so the maximizer over any convex
/// set is the projection of B'x/tau onto that set.
template <typename Scalar>
class MinimaxProblem {
 public:
  using Family = std::variant<QuadraticSaddle<Scalar>, TrigSaddle<Scalar>>;

  /// `ell` defaults to the conservative spectral bound; a declared value must not be smaller.
  MinimaxProblem(Family family, Scalar tau, ConstraintSet<Scalar> set_y,
                 std::optional<Scalar> ell = std::nullopt)
      : family_(std::move(family)), tau_(tau), set_y_(std::move(set_y)) {
    if (!(tau_ > Scalar(0))) throw ConfigError("tau must be positive");
    std::visit([this](const auto& fam) { validate(fam); }, family_);
    d2_ = set_y_.dim();
    const Matrix<Scalar>& b = coupling();
    if (b.cols() != d2_)
      throw ConfigError("coupling matrix has " + std::to_string(b.cols()) +
                        " columns but the constraint set has dimension " + std::to_string(d2_));
    const Scalar bound = lipschitz_bound();
    if (ell) {
      const Scalar slack = std::max(Scalar(1e-12), Scalar(64) * std::numeric_limits<Scalar>::epsilon());
      if (!(*ell >= bound * (Scalar(1) - slack)))
        throw ConfigError("declared ell " + std::to_string(double(*ell)) +
                          " is below the gradient-Lipschitz bound " + std::to_string(double(bound)));
      ell_ = *ell;
    } else {
      ell_ = bound;
    }
    if (tau_ > ell_) throw ConfigError("tau must not exceed ell");
  }

  Eigen::Index d1() const noexcept { return d1_; }
  Eigen::Index d2() const noexcept { return d2_; }
  Scalar ell() const noexcept { return ell_; }
  Scalar tau() const noexcept { return tau_; }
  Scalar kappa() const noexcept { return ell_ / tau_; }
  const ConstraintSet<Scalar>& set_y() const noexcept { return set_y_; }
  const Family& family() const noexcept { return family_; }
  bool is_quadratic() const noexcept { return std::holds_alternative<QuadraticSaddle<Scalar>>(family_); }

  const Matrix<Scalar>& coupling() const {
    return std::visit([](const auto& fam) -> const Matrix<Scalar>& { return fam.B; }, family_);
  }

  // The members below are analytic and uncounted; solvers only go through eval().

  Scalar value(const Vector<Scalar>& x, const Vector<Scalar>& y) const {
    const Scalar coupled = x.dot(coupling() * y) - Scalar(0.5) * tau_ * y.squaredNorm();
    return std::visit(
        [&](const auto& fam) -> Scalar {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, QuadraticSaddle<Scalar>>)
            return Scalar(0.5) * x.dot(fam.A * x) + coupled;
          else
            return fam.amplitudes.dot(x.array().cos().matrix()) + coupled;
        },
        family_);
  }

  Vector<Scalar> grad_x(const Vector<Scalar>& x, const Vector<Scalar>& y) const {
    Vector<Scalar> g = coupling() * y;
    std::visit(
        [&](const auto& fam) {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, QuadraticSaddle<Scalar>>)
            g.noalias() += fam.A * x;
          else
            g.array() -= fam.amplitudes.array() * x.array().sin();
        },
        family_);
    return g;
  }

  Vector<Scalar> grad_y(const Vector<Scalar>& x, const Vector<Scalar>& y) const {
    return coupling().transpose() * x - tau_ * y;
  }

  Vector<Scalar> y_star(const Vector<Scalar>& x) const {
    check_x(x);
    return project(set_y_, Vector<Scalar>(coupling().transpose() * x / tau_));
  }

  Scalar g(const Vector<Scalar>& x) const { return value(x, y_star(x)); }

  void check_x(const Vector<Scalar>& x) const {
    if (x.size() != d1_)
      throw std::invalid_argument("x has dimension " + std::to_string(x.size()) + ", expected " +
                                  std::to_string(d1_));
  }

  void check_y(const Vector<Scalar>& y) const {
    if (y.size() != d2_)
      throw std::invalid_argument("y has dimension " + std::to_string(y.size()) + ", expected " +
                                  std::to_string(d2_));
  }

 private:
  void validate(const QuadraticSaddle<Scalar>& q) {
    if (q.A.rows() != q.A.cols() || q.A.rows() == 0) throw ConfigError("A must be square and non-empty");
    const Scalar scale = std::max(Scalar(1), q.A.cwiseAbs().maxCoeff());
    if ((q.A - q.A.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
      throw ConfigError("A must be symmetric");
    if (q.B.rows() != q.A.rows()) throw ConfigError("B must have as many rows as A");
    d1_ = q.A.rows();
  }

  void validate(const TrigSaddle<Scalar>& t) {
    if (t.amplitudes.size() == 0) throw ConfigError("amplitudes must be non-empty");
    if ((t.amplitudes.array() <= Scalar(0)).any()) throw ConfigError("amplitudes must be positive");
    if (t.B.rows() != t.amplitudes.size()) throw ConfigError("B must have one row per amplitude");
    d1_ = t.amplitudes.size();
  }

  // The Hessian is [[H_xx, B], [B', -tau I]]; its norm is bounded by the largest
  // row sum of the 2x2 matrix of block norms.
  Scalar lipschitz_bound() const {
    const Scalar nb = spectral_norm(coupling());
    const Scalar hxx = std::visit(
        [](const auto& fam) -> Scalar {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, QuadraticSaddle<Scalar>>)
            return spectral_norm(fam.A);
          else
            return fam.amplitudes.maxCoeff();
        },
        family_);
    return std::max(hxx + nb, nb + tau_);
  }

  Family family_;
  Scalar tau_;
  ConstraintSet<Scalar> set_y_;
  Eigen::Index d1_ = 0;
  Eigen::Index d2_ = 0;
  Scalar ell_ = Scalar(0);
};

/// Counted zeroth-order evaluation of f.
template <typename Scalar>
Scalar eval(const MinimaxProblem<Scalar>& problem, const Vector<Scalar>& x, const Vector<Scalar>& y,
            OracleCounter& counter) {
  problem.check_x(x);
  problem.check_y(y);
  if (!x.allFinite() || !y.allFinite())
    throw NumericalError("non-finite oracle query at x=" + format_point(x) + ", y=" + format_point(y));
  ++counter.raw_evals;
  return problem.value(x, y);
}

/// Exact maximizer of f(x, .) over the constraint set.
template <typename Scalar>
Vector<Scalar> analytic_y_star(const MinimaxProblem<Scalar>& problem, const Vector<Scalar>& x) {
  return problem.y_star(x);
}

/// grad g(x) = grad_x f(x, y*(x)).
template <typename Scalar>
Vector<Scalar> analytic_grad_g(const MinimaxProblem<Scalar>& problem, const Vector<Scalar>& x) {
  return problem.grad_x(x, problem.y_star(x));
}

/// Additive linear noise: F(x,y,xi) = f(x,y) + <xi_x, x> + <xi_y, y>,
/// xi_x ~ N(0, sigma1^2/d1 I), xi_y ~ N(0, sigma2^2/d2 I).
template <typename Scalar>
struct StochasticWrapper {
  MinimaxProblem<Scalar> base;
  Scalar sigma1 = Scalar(0);
  Scalar sigma2 = Scalar(0);
};

template <typename Scalar>
struct NoiseDraw {
  Vector<Scalar> xi_x;
  Vector<Scalar> xi_y;
};

/// Draws one noise realization. A zero sigma consumes no randomness, so the
/// noiseless wrapper follows the same random stream as the deterministic oracle.
template <typename Scalar>
NoiseDraw<Scalar> draw_noise(const StochasticWrapper<Scalar>& w, Rng& rng) {
  const auto d1 = w.base.d1();
  const auto d2 = w.base.d2();
  NoiseDraw<Scalar> xi{Vector<Scalar>::Zero(d1), Vector<Scalar>::Zero(d2)};
  if (w.sigma1 > Scalar(0)) xi.xi_x = (w.sigma1 / std::sqrt(Scalar(d1))) * standard_normal<Scalar>(d1, rng);
  if (w.sigma2 > Scalar(0)) xi.xi_y = (w.sigma2 / std::sqrt(Scalar(d2))) * standard_normal<Scalar>(d2, rng);
  return xi;
}

template <typename Scalar>
Scalar eval_with_noise(const StochasticWrapper<Scalar>& w, const Vector<Scalar>& x, const Vector<Scalar>& y,
                       const NoiseDraw<Scalar>& xi, OracleCounter& counter) {
  Scalar v = eval(w.base, x, y, counter);
  if (w.sigma1 > Scalar(0)) v += xi.xi_x.dot(x);
  if (w.sigma2 > Scalar(0)) v += xi.xi_y.dot(y);
  return v;
}

/// One draw of F(x, y, xi).
template <typename Scalar>
Scalar eval_stochastic(const StochasticWrapper<Scalar>& w, const Vector<Scalar>& x, const Vector<Scalar>& y,
                       Rng& rng, OracleCounter& counter) {
  return eval_with_noise(w, x, y, draw_noise(w, rng), counter);
}

// ---------------------------------------------------------------------------
// Seeded fixture construction.
//
// Draw order from Rng(seed): B (d1 x d2, row-major, standard normal), then either
// G (d1 x d1, row-major) for the quadratic or d1 uniform(0.5, 1) amplitudes for the
// trig family. B is rescaled to spectral norm beta = coupling * (kappa - 1) * tau and
// the x-curvature (|A| or max amplitude) to alpha = kappa * tau - beta, so the
// declared ell = kappa * tau is exactly the conservative Lipschitz bound.
// A = GG' (positive semidefinite) unless `indefinite`, then A = (G + G')/2.
// ---------------------------------------------------------------------------

enum class FamilyKind { quadratic, trig };

template <typename Scalar>
struct FixtureSpec {
  FamilyKind family = FamilyKind::trig;
  Eigen::Index d1 = 4;
  Eigen::Index d2 = 3;
  Scalar tau = Scalar(1);
  Scalar kappa = Scalar(2);
  Scalar coupling = Scalar(0.5);
  bool indefinite = false;
  std::uint64_t seed = 0;
};

namespace detail {
template <typename Scalar>
Matrix<Scalar> normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  Matrix<Scalar> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

template <typename Scalar>
Matrix<Scalar> rescaled(Matrix<Scalar> m, Scalar target) {
  const Scalar n = spectral_norm(m);
  if (target == Scalar(0) || n == Scalar(0)) return Matrix<Scalar>::Zero(m.rows(), m.cols());
  return m * (target / n);
}
}  // namespace detail

template <typename Scalar>
MinimaxProblem<Scalar> make_fixture(const FixtureSpec<Scalar>& spec, ConstraintSet<Scalar> set_y) {
  if (spec.d1 <= 0 || spec.d2 <= 0) throw ConfigError("fixture dimensions must be positive");
  if (!(spec.tau > Scalar(0))) throw ConfigError("tau must be positive");
  if (!(spec.kappa >= Scalar(1))) throw ConfigError("kappa must be at least 1");
  if (!(spec.coupling >= Scalar(0) && spec.coupling <= Scalar(1)))
    throw ConfigError("coupling fraction must lie in [0, 1]");
  if (set_y.dim() != spec.d2) throw ConfigError("constraint set dimension must equal d2");

  Rng rng(spec.seed);
  const Scalar beta = spec.coupling * (spec.kappa - Scalar(1)) * spec.tau;
  const Scalar alpha = spec.kappa * spec.tau - beta;
  Matrix<Scalar> B = detail::rescaled(detail::normal_matrix<Scalar>(spec.d1, spec.d2, rng), beta);
  const Scalar ell = spec.kappa * spec.tau;

  if (spec.family == FamilyKind::quadratic) {
    Matrix<Scalar> G = detail::normal_matrix<Scalar>(spec.d1, spec.d1, rng);
    Matrix<Scalar> A = spec.indefinite ? Matrix<Scalar>((G + G.transpose()) / Scalar(2))
                                       : Matrix<Scalar>(G * G.transpose());
    A = detail::rescaled(std::move(A), alpha);
    A = (A + A.transpose()).eval() / Scalar(2);
    return MinimaxProblem<Scalar>(QuadraticSaddle<Scalar>{std::move(A), std::move(B)}, spec.tau,
                                  std::move(set_y), ell);
  }
  std::uniform_real_distribution<Scalar> unif(Scalar(0.5), Scalar(1));
  Vector<Scalar> a(spec.d1);
  for (Eigen::Index i = 0; i < spec.d1; ++i) a[i] = unif(rng);
  a *= alpha / a.maxCoeff();
  return MinimaxProblem<Scalar>(TrigSaddle<Scalar>{std::move(a), std::move(B)}, spec.tau, std::move(set_y), ell);
}

}  // namespace zominimax

#endif  // ZOMINIMAX_PROBLEMS_HPP
