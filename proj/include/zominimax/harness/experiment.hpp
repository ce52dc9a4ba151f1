#ifndef ZOMINIMAX_HARNESS_EXPERIMENT_HPP
#define ZOMINIMAX_HARNESS_EXPERIMENT_HPP

#include "zominimax/harness/config.hpp"
#include "zominimax/solvers.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

namespace zominimax::harness {

struct SweepRow {
  double eps = 0.0;
  std::uint32_t repetition = 0;
  std::uint64_t seed = 0;
  std::uint64_t S = 0;
  double min_grad_g_sq = 0.0;
  std::uint64_t best_iter = 0;
  std::optional<std::uint64_t> iterations_to_target;  ///< first s with |grad g(x_s)|^2 <= eps^2
  std::optional<std::uint64_t> samples_to_target;
  OracleCounter final_counter;
  double wall_time_s = 0.0;
  std::string trace_file;
};

/// Mean over repetitions of the per-iteration |grad g|^2 curve.
struct EpsAggregate {
  double eps = 0.0;
  DerivedParams params;
  std::vector<double> mean_curve;
  double min_mean_grad_g_sq = 0.0;
  std::optional<std::uint64_t> iterations_to_target;
  std::optional<std::uint64_t> samples_to_target;
};

struct SweepResult {
  std::vector<SweepRow> rows;  ///< eps-major, |eps grid| * R rows
  std::vector<EpsAggregate> aggregates;
};

struct ExperimentOutput {
  bool write_files = true;
  std::optional<std::filesystem::path> directory;  ///< overrides output_directory(cfg)
};

Eigen::VectorXd initial_x(const ExperimentConfig& cfg);
Eigen::VectorXd initial_y(const ExperimentConfig& cfg, const MinimaxProblem<double>& problem);

/// Default trace thinning stride max(1, S/1000).
std::uint64_t default_stride(std::uint64_t S);

void write_trace_csv(std::ostream& out, const RunTrace<double>& trace, std::uint64_t stride);

SweepResult run_experiment(const ExperimentConfig& cfg, const ExperimentOutput& output = {});

nlohmann::json summary_json(const ExperimentConfig& cfg, const SweepResult& result);

nlohmann::json params_json(const DerivedParams& p);

}  // namespace zominimax::harness

#endif  // ZOMINIMAX_HARNESS_EXPERIMENT_HPP
