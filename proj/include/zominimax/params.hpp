#ifndef ZOMINIMAX_PARAMS_HPP
#define ZOMINIMAX_PARAMS_HPP

#include "zominimax/core.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace zominimax {

enum class Mode { gda, gdmsa, sgda, sgdmsa };

constexpr bool is_multistep(Mode m) noexcept { return m == Mode::gdmsa || m == Mode::sgdmsa; }
constexpr bool is_stochastic(Mode m) noexcept { return m == Mode::sgda || m == Mode::sgdmsa; }

inline std::string_view to_string(Mode m) noexcept {
  switch (m) {
    case Mode::gda: return "gda";
    case Mode::gdmsa: return "gdmsa";
    case Mode::sgda: return "sgda";
    case Mode::sgdmsa: return "sgdmsa";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "gda" || s == "zo-gda") return Mode::gda;
  if (s == "gdmsa" || s == "zo-gdmsa") return Mode::gdmsa;
  if (s == "sgda" || s == "zo-sgda") return Mode::sgda;
  if (s == "sgdmsa" || s == "zo-sgdmsa") return Mode::sgdmsa;
  throw ConfigError("unknown solver mode '" + std::string(s) + "' (expected gda, gdmsa, sgda or sgdmsa)");
}

struct ProblemConstants {
  double ell = 1.0;
  double tau = 1.0;
  std::int64_t d1 = 1;
  std::int64_t d2 = 1;
  std::optional<double> diameter;  ///< nullopt for an unbounded set
};

/// Constants multiplying the big-O schedule terms, plus direct overrides.
struct ConstantOverrides {
  double C_S = 1.0;
  double C_mu = 1.0;
  double C_T = 1.0;
  std::optional<double> eta1;        ///< replaces the step-size formula
  std::optional<double> eta1_scale;  ///< multiplies the step-size formula
  std::optional<std::uint64_t> S;
  std::optional<std::uint64_t> T;
};

struct DerivedParams {
  Mode mode = Mode::gda;
  double eps = 0.1;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  std::uint64_t S = 0;
  std::optional<std::uint64_t> T;
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::uint64_t q1 = 1;
  std::uint64_t q2 = 1;
  std::optional<std::uint64_t> m1;
  std::optional<std::uint64_t> m2;
  double kappa = 1.0;
  double Lg = 0.0;
  ConstantOverrides overrides;

  std::uint64_t x_batch() const { return is_stochastic(mode) ? m1.value() : q1; }
  std::uint64_t y_batch() const { return is_stochastic(mode) ? m2.value() : q2; }
};

/// Rounds up, ignoring relative roundoff below 1e-12 (so 8000.000000000001 -> 8000).
inline std::uint64_t ceil_count(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("count formula produced " + std::to_string(v));
  return static_cast<std::uint64_t>(std::ceil(v * (1.0 - 1e-12)));
}

/// Deterministic mini-batch size 2(d+6).
constexpr std::uint64_t deterministic_batch(std::int64_t d) { return 2 * static_cast<std::uint64_t>(d + 6); }

/// Stochastic mini-batch size ceil(4(d+6)(sigma^2+1)/eps^2).
inline std::uint64_t stochastic_batch(std::int64_t d, double sigma, double eps) {
  return ceil_count(4.0 * double(d + 6) * (sigma * sigma + 1.0) / (eps * eps));
}

/// Single-ascent step size denominator 4 * 12^4 * kappa^2 (kappa+1)^2 (ell+1).
inline double gda_eta1_denominator(double kappa, double ell) {
  return 4.0 * 20736.0 * kappa * kappa * (kappa + 1.0) * (kappa + 1.0) * (ell + 1.0);
}

inline DerivedParams derive_params(Mode mode, const ProblemConstants& c, double eps, double sigma1 = 0.0,
                                   double sigma2 = 0.0, const ConstantOverrides& ov = {}) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  if (!(c.ell > 0.0) || !(c.tau > 0.0)) throw ConfigError("ell and tau must be positive");
  if (c.tau > c.ell) throw ConfigError("tau must not exceed ell");
  if (c.d1 <= 0 || c.d2 <= 0) throw ConfigError("dimensions must be positive");
  if (!(sigma1 >= 0.0) || !(sigma2 >= 0.0)) throw ConfigError("noise levels must be non-negative");
  if (!(ov.C_S >= 0.0) || !(ov.C_mu > 0.0) || !(ov.C_T > 0.0))
    throw ConfigError("schedule constants must be positive (C_S may be zero)");
  if (is_multistep(mode) && !c.diameter)
    throw ConfigError(std::string(to_string(mode)) +
                      " requires a bounded convex constraint set with finite diameter D");

  DerivedParams p;
  p.mode = mode;
  p.eps = eps;
  p.sigma1 = sigma1;
  p.sigma2 = sigma2;
  p.overrides = ov;
  p.kappa = c.ell / c.tau;
  p.Lg = c.ell * (1.0 + p.kappa);
  p.eta2 = 1.0 / (6.0 * c.ell);
  p.q1 = deterministic_batch(c.d1);
  p.q2 = deterministic_batch(c.d2);

  const double d1_pow = std::pow(double(c.d1), -1.5);
  const double d2_pow = std::pow(double(c.d2), -1.5);
  const double inv_eps_sq = 1.0 / (eps * eps);
  if (is_multistep(mode)) {
    p.eta1 = 1.0 / (12.0 * p.Lg);
    p.S = ceil_count(ov.C_S * p.kappa * inv_eps_sq);
    p.mu1 = ov.C_mu * eps * d1_pow;
    p.mu2 = ov.C_mu * eps * d2_pow / std::sqrt(p.kappa);
    p.T = ov.T ? *ov.T : ceil_count(ov.C_T * p.kappa * std::log(1.0 / eps));
    if (*p.T == 0) throw ConfigError("inner iteration count T must be positive");
  } else {
    p.eta1 = 1.0 / gda_eta1_denominator(p.kappa, c.ell);
    p.S = ceil_count(ov.C_S * std::pow(p.kappa, 5) * inv_eps_sq);
    p.mu1 = ov.C_mu * eps * d1_pow / (p.kappa * p.kappa);
    p.mu2 = ov.C_mu * eps * d2_pow / (p.kappa * p.kappa);
  }
  if (ov.eta1_scale) p.eta1 *= *ov.eta1_scale;
  if (ov.eta1) p.eta1 = *ov.eta1;
  if (!(p.eta1 > 0.0)) throw ConfigError("eta1 must be positive");
  if (ov.S) p.S = *ov.S;
  if (is_stochastic(mode)) {
    p.m1 = stochastic_batch(c.d1, sigma1, eps);
    p.m2 = stochastic_batch(c.d2, sigma2, eps);
  }
  return p;
}

}  // namespace zominimax

#endif  // ZOMINIMAX_PARAMS_HPP
