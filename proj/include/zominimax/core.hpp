#ifndef ZOMINIMAX_CORE_HPP
#define ZOMINIMAX_CORE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace zominimax {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Non-deduced vector parameter, so Eigen expressions bind to solver arguments.
template <typename Scalar>
using VectorArg = std::type_identity_t<Vector<Scalar>>;

using Rng = std::mt19937_64;

/// Invalid user input: malformed configuration, bad dimensions, violated preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value or diverged.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <typename Scalar>
Vector<Scalar> standard_normal(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  Vector<Scalar> out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out[i] = normal(rng);
  return out;
}

template <typename Derived>
std::string format_point(const Eigen::MatrixBase<Derived>& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(static_cast<double>(v[i]));
  }
  return s + ")";
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

}  // namespace zominimax

#endif  // ZOMINIMAX_CORE_HPP
