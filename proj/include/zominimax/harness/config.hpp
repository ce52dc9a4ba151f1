#ifndef ZOMINIMAX_HARNESS_CONFIG_HPP
#define ZOMINIMAX_HARNESS_CONFIG_HPP

#include "zominimax/params.hpp"
#include "zominimax/problems.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace zominimax::harness {

struct SetConfig {
  std::string kind = "ball";  ///< "ball" | "box" | "whole"
  double radius = 1.0;
  std::vector<double> center;  ///< empty: origin
  std::vector<double> lower;
  std::vector<double> upper;
};

struct ProblemConfig {
  FamilyKind family = FamilyKind::trig;
  std::int64_t d1 = 4;
  std::int64_t d2 = 3;
  double tau = 1.0;
  double kappa = 2.0;
  double coupling = 0.5;
  bool indefinite = false;
  std::uint64_t seed = 7;
  SetConfig set;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

struct VerifyConfig {
  std::vector<double> mu{1e-3, 1e-2};
  std::uint64_t samples = 1'000'000;
  double eps = 0.1;
  std::optional<double> sigma1;  ///< defaults to the problem's noise level
  std::optional<double> sigma2;
  std::vector<FamilyKind> families{FamilyKind::quadratic, FamilyKind::trig};
};

struct ExperimentConfig {
  ProblemConfig problem;
  Mode mode = Mode::gdmsa;
  std::vector<double> eps_grid{0.1};
  ConstantOverrides overrides;
  std::optional<std::vector<double>> x0;
  std::optional<std::vector<double>> y0;
  double x0_scale = 1.0;
  std::uint32_t repetitions = 20;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> trace_stride;  ///< default max(1, S/1000)
  std::string output_dir = "zominimax_out";
  VerifyConfig verify;
};

/// Environment variable that overrides `output_dir`.
inline constexpr const char* kOutputDirEnv = "ZOMINIMAX_OUTPUT_DIR";

/// Parses and validates; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully populated configuration, defaults included.
nlohmann::json to_json(const ExperimentConfig& cfg);

std::string_view to_string(FamilyKind f) noexcept;

ConstraintSet<double> build_set(const SetConfig& s, std::int64_t d2);
MinimaxProblem<double> build_problem(const ProblemConfig& p);
MinimaxProblem<double> build_problem(const ProblemConfig& p, FamilyKind family);
ProblemConstants constants_of(const MinimaxProblem<double>& problem);

/// Resolved output directory: environment override, else the config field.
std::filesystem::path output_directory(const ExperimentConfig& cfg);

}  // namespace zominimax::harness

#endif  // ZOMINIMAX_HARNESS_CONFIG_HPP
