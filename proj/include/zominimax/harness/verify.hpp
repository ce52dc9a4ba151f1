#ifndef ZOMINIMAX_HARNESS_VERIFY_HPP
#define ZOMINIMAX_HARNESS_VERIFY_HPP

#include "zominimax/harness/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace zominimax::harness {

/// Largest acceptable per-coordinate z-score of an estimator mean.
inline constexpr double kMaxZScore = 4.0;

struct BoundCheck {
  std::string family;
  double mu = 0.0;
  std::string name;
  double empirical = 0.0;
  double theoretical = 0.0;
  bool pass = false;
};

struct EstimatorReport {
  std::vector<BoundCheck> checks;
  bool all_pass() const;
  const BoundCheck& find(const std::string& family, double mu, const std::string& name) const;
};

/// Runs the Monte Carlo bound suite for every (family, mu) in cfg.verify.
EstimatorReport verify_estimators(const ExperimentConfig& cfg);

nlohmann::json to_json(const EstimatorReport& report);

}  // namespace zominimax::harness

#endif  // ZOMINIMAX_HARNESS_VERIFY_HPP
