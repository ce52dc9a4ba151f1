#ifndef ZOMINIMAX_GEOMETRY_HPP
#define ZOMINIMAX_GEOMETRY_HPP

#include "zominimax/core.hpp"

#include <optional>
#include <variant>

namespace zominimax {

/// Absolute tolerance for set membership.
inline constexpr double kMembershipTolerance = 1e-10;

template <typename Scalar>
struct EuclideanBall {
  Vector<Scalar> center;
  Scalar radius;
};

template <typename Scalar>
struct Box {
  Vector<Scalar> lower;
  Vector<Scalar> upper;
};

struct WholeSpace {
  Eigen::Index dim;
};

/// Closed convex feasible region for the maximization variable.
template <typename Scalar>
class ConstraintSet {
 public:
  using Variant = std::variant<EuclideanBall<Scalar>, Box<Scalar>, WholeSpace>;

  static ConstraintSet ball(Vector<Scalar> center, Scalar radius) {
    if (!(radius > Scalar(0))) throw ConfigError("ball radius must be positive");
    if (center.size() == 0) throw ConfigError("ball center must be non-empty");
    return ConstraintSet(EuclideanBall<Scalar>{std::move(center), radius});
  }

  static ConstraintSet ball(Eigen::Index dim, Scalar radius) {
    return ball(Vector<Scalar>::Zero(dim), radius);
  }

  static ConstraintSet box(Vector<Scalar> lower, Vector<Scalar> upper) {
    if (lower.size() != upper.size() || lower.size() == 0)
      throw ConfigError("box bounds must be non-empty and of equal dimension");
    if ((lower.array() > upper.array()).any())
      throw ConfigError("box requires lower <= upper componentwise");
    return ConstraintSet(Box<Scalar>{std::move(lower), std::move(upper)});
  }

  static ConstraintSet whole(Eigen::Index dim) {
    if (dim <= 0) throw ConfigError("whole-space dimension must be positive");
    return ConstraintSet(WholeSpace{dim});
  }

  const Variant& variant() const noexcept { return set_; }

  Eigen::Index dim() const {
    return std::visit(
        [](const auto& s) -> Eigen::Index {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, EuclideanBall<Scalar>>)
            return s.center.size();
          else if constexpr (std::is_same_v<T, Box<Scalar>>)
            return s.lower.size();
          else
            return s.dim;
        },
        set_);
  }

  bool bounded() const noexcept { return !std::holds_alternative<WholeSpace>(set_); }

 private:
  explicit ConstraintSet(Variant v) : set_(std::move(v)) {}
  Variant set_;
};

namespace detail {
template <typename Scalar, typename Derived>
void check_dim(const ConstraintSet<Scalar>& set, const Eigen::MatrixBase<Derived>& p) {
  if (p.size() != set.dim())
    throw std::invalid_argument("point dimension " + std::to_string(p.size()) +
                                " does not match constraint set dimension " +
                                std::to_string(set.dim()));
}
}  // namespace detail

/// Euclidean projection. Feasible points are returned unchanged.
template <typename Scalar, typename Derived>
Vector<Scalar> project(const ConstraintSet<Scalar>& set, const Eigen::MatrixBase<Derived>& p) {
  detail::check_dim(set, p);
  return std::visit(
      [&](const auto& s) -> Vector<Scalar> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EuclideanBall<Scalar>>) {
          Vector<Scalar> offset = p - s.center;
          const Scalar norm = offset.norm();
          if (norm <= s.radius) return p;
          return s.center + (s.radius / norm) * offset;
        } else if constexpr (std::is_same_v<T, Box<Scalar>>) {
          return p.cwiseMax(s.lower).cwiseMin(s.upper);
        } else {
          return p;
        }
      },
      set.variant());
}

/// Diameter of the set; std::nullopt means unbounded.
template <typename Scalar>
std::optional<Scalar> diameter(const ConstraintSet<Scalar>& set) {
  return std::visit(
      [](const auto& s) -> std::optional<Scalar> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EuclideanBall<Scalar>>)
          return Scalar(2) * s.radius;
        else if constexpr (std::is_same_v<T, Box<Scalar>>)
          return (s.upper - s.lower).norm();
        else
          return std::nullopt;
      },
      set.variant());
}

template <typename Scalar, typename Derived>
bool contains(const ConstraintSet<Scalar>& set, const Eigen::MatrixBase<Derived>& p,
              Scalar tol = Scalar(kMembershipTolerance)) {
  detail::check_dim(set, p);
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EuclideanBall<Scalar>>)
          return (p - s.center).norm() <= s.radius + tol;
        else if constexpr (std::is_same_v<T, Box<Scalar>>)
          return ((p.array() >= s.lower.array() - tol) && (p.array() <= s.upper.array() + tol)).all();
        else
          return p.allFinite();
      },
      set.variant());
}

}  // namespace zominimax

#endif  // ZOMINIMAX_GEOMETRY_HPP
