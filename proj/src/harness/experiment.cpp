#include "zominimax/harness/experiment.hpp"

#include "zominimax/stationarity.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>

namespace zominimax::harness {

using nlohmann::json;

namespace {

constexpr std::uint64_t kInitStream = 0x1D1700ULL;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json optional_json(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

Eigen::VectorXd initial_x(const ExperimentConfig& cfg) {
  if (cfg.x0) return Eigen::Map<const Eigen::VectorXd>(cfg.x0->data(), Eigen::Index(cfg.x0->size()));
  Rng rng(mix_seed(cfg.seed, kInitStream));
  return cfg.x0_scale * standard_normal<double>(cfg.problem.d1, rng);
}

Eigen::VectorXd initial_y(const ExperimentConfig& cfg, const MinimaxProblem<double>& problem) {
  if (cfg.y0) {
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(cfg.y0->data(), Eigen::Index(cfg.y0->size()));
    if (!contains(problem.set_y(), y)) throw ConfigError("config field 'init.y0': point is not feasible");
    return y;
  }
  return project(problem.set_y(), Eigen::VectorXd::Zero(problem.d2()));
}

std::uint64_t default_stride(std::uint64_t S) { return std::max<std::uint64_t>(1, S / 1000); }

void write_trace_csv(std::ostream& out, const RunTrace<double>& trace, std::uint64_t stride) {
  out << "iter,grad_g_sq,samples_x,samples_y,raw_evals,x_norm,y_norm\n";
  const std::size_t n = trace.iterates.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i % stride != 0 && i + 1 != n) continue;
    const auto& it = trace.iterates[i];
    out << it.s << ',' << format_double(trace.stationarity_sq.at(i)) << ',' << it.counter.samples_x << ','
        << it.counter.samples_y << ',' << it.counter.raw_evals << ',' << format_double(it.x.norm()) << ','
        << format_double(it.y.norm()) << '\n';
  }
}

SweepResult run_experiment(const ExperimentConfig& cfg, const ExperimentOutput& output) {
  const auto problem = build_problem(cfg.problem);
  const StochasticWrapper<double> wrapper{problem, cfg.problem.sigma1, cfg.problem.sigma2};
  const ProblemConstants constants = constants_of(problem);
  const Eigen::VectorXd x0 = initial_x(cfg);
  const Eigen::VectorXd y0 = initial_y(cfg, problem);

  std::filesystem::path dir;
  if (output.write_files) {
    dir = output.directory ? *output.directory : output_directory(cfg);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  }

  SweepResult result;
  for (std::size_t e = 0; e < cfg.eps_grid.size(); ++e) {
    const double eps = cfg.eps_grid[e];
    const DerivedParams params =
        derive_params(cfg.mode, constants, eps, cfg.problem.sigma1, cfg.problem.sigma2, cfg.overrides);
    const std::uint64_t stride = cfg.trace_stride ? *cfg.trace_stride : default_stride(params.S);

    EpsAggregate agg;
    agg.eps = eps;
    agg.params = params;
    agg.mean_curve.assign(params.S + 1, 0.0);
    std::vector<std::uint64_t> samples_at(params.S + 1, 0);

    for (std::uint32_t r = 0; r < cfg.repetitions; ++r) {
      SweepRow row;
      row.eps = eps;
      row.repetition = r;
      row.seed = mix_seed(cfg.seed, r);
      row.S = params.S;

      const auto t0 = std::chrono::steady_clock::now();
      auto trace = run_solver(wrapper, params, x0, y0, row.seed);
      fill_stationarity(trace, problem);
      row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      row.best_iter = best_iterate(trace);
      row.min_grad_g_sq = trace.stationarity_sq[row.best_iter];
      row.final_counter = trace.final_counter();
      const double target = eps * eps;
      for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
        agg.mean_curve[i] += trace.stationarity_sq[i] / cfg.repetitions;
        samples_at[i] = trace.iterates[i].counter.samples();
        if (!row.iterations_to_target && trace.stationarity_sq[i] <= target) {
          row.iterations_to_target = trace.iterates[i].s;
          row.samples_to_target = trace.iterates[i].counter.samples();
        }
      }

      if (output.write_files) {
        char name[64];
        std::snprintf(name, sizeof name, "trace_e%zu_r%u.csv", e, r);
        row.trace_file = name;
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        write_trace_csv(out, trace, stride);
        if (!out) throw std::runtime_error("write failed for " + (dir / name).string());
      }
      result.rows.push_back(std::move(row));
    }

    agg.min_mean_grad_g_sq = *std::min_element(agg.mean_curve.begin(), agg.mean_curve.end());
    for (std::size_t i = 0; i < agg.mean_curve.size(); ++i) {
      if (agg.mean_curve[i] <= eps * eps) {
        agg.iterations_to_target = i;
        agg.samples_to_target = samples_at[i];
        break;
      }
    }
    result.aggregates.push_back(std::move(agg));
  }

  if (output.write_files) {
    write_file(dir / "summary.json", summary_json(cfg, result).dump(2) + "\n");
    json timing = json::array();
    for (const auto& row : result.rows)
      timing.push_back({{"eps", row.eps}, {"repetition", row.repetition}, {"wall_time_s", row.wall_time_s}});
    write_file(dir / "timing.json", timing.dump(2) + "\n");
  }
  return result;
}

json params_json(const DerivedParams& p) {
  return json{{"mode", std::string(to_string(p.mode))},
              {"eps", p.eps},
              {"sigma1", p.sigma1},
              {"sigma2", p.sigma2},
              {"eta1", p.eta1},
              {"eta2", p.eta2},
              {"S", p.S},
              {"T", optional_json(p.T)},
              {"mu1", p.mu1},
              {"mu2", p.mu2},
              {"q1", p.q1},
              {"q2", p.q2},
              {"m1", optional_json(p.m1)},
              {"m2", optional_json(p.m2)},
              {"kappa", p.kappa},
              {"Lg", p.Lg}};
}

json summary_json(const ExperimentConfig& cfg, const SweepResult& result) {
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"eps", r.eps},
                    {"repetition", r.repetition},
                    {"seed", r.seed},
                    {"S", r.S},
                    {"min_grad_g_sq", r.min_grad_g_sq},
                    {"best_iter", r.best_iter},
                    {"iterations_to_target", optional_json(r.iterations_to_target)},
                    {"samples_to_target", optional_json(r.samples_to_target)},
                    {"samples_x", r.final_counter.samples_x},
                    {"samples_y", r.final_counter.samples_y},
                    {"total_samples", r.final_counter.samples()},
                    {"raw_evals", r.final_counter.raw_evals},
                    {"trace_file", r.trace_file}});
  }
  json aggs = json::array();
  for (const auto& a : result.aggregates) {
    aggs.push_back({{"eps", a.eps},
                    {"params", params_json(a.params)},
                    {"min_mean_grad_g_sq", a.min_mean_grad_g_sq},
                    {"iterations_to_target", optional_json(a.iterations_to_target)},
                    {"samples_to_target", optional_json(a.samples_to_target)}});
  }
  return json{{"config", to_json(cfg)}, {"rows", rows}, {"aggregates", aggs}};
}

}  // namespace zominimax::harness
