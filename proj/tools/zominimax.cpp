// Command-line front end: run, sweep, verify-estimator, params, defaults.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.

#include "zominimax/harness/config.hpp"
#include "zominimax/harness/experiment.hpp"
#include "zominimax/harness/params_report.hpp"
#include "zominimax/harness/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace zh = zominimax::harness;

namespace {

constexpr int kConfigFailure = 1;
constexpr int kNumericalFailure = 2;

void print_rows(const zh::SweepResult& result) {
  for (const auto& a : result.aggregates) {
    std::printf("eps=%g S=%llu mean-curve min |grad g|^2=%.6g iterations-to-target=%s samples-to-target=%s\n", a.eps,
                static_cast<unsigned long long>(a.params.S), a.min_mean_grad_g_sq,
                a.iterations_to_target ? std::to_string(*a.iterations_to_target).c_str() : "none",
                a.samples_to_target ? std::to_string(*a.samples_to_target).c_str() : "none");
  }
}

int run_config(const std::string& path, const std::string& out_dir, bool sweep) {
  auto cfg = zh::load_config(path);
  if (!sweep && cfg.eps_grid.size() != 1)
    throw zominimax::ConfigError("config field 'solver.eps': 'run' takes a single eps; use 'sweep' for a grid");
  zh::ExperimentOutput output;
  if (!out_dir.empty()) output.directory = out_dir;
  const auto result = zh::run_experiment(cfg, output);
  print_rows(result);
  std::cout << "wrote " << (output.directory ? *output.directory : zh::output_directory(cfg)).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroth-order nonconvex-strongly-concave minimax solvers and benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run one eps value for all repetitions");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("-o,--output", out_dir, "Output directory (overrides config and environment)");

  auto* sweep = app.add_subcommand("sweep", "Run every eps in the config grid");
  sweep->add_option("config", config_path, "JSON config file")->required();
  sweep->add_option("-o,--output", out_dir, "Output directory");

  bool strict = false;
  auto* verify = app.add_subcommand("verify-estimator", "Monte Carlo bound suite for the gradient estimators");
  verify->add_option("config", config_path, "JSON config file")->required();
  verify->add_option("-o,--output", out_dir, "Output directory");
  verify->add_flag("--strict", strict, "Exit with status 2 when any bound fails");

  std::string mode = "gda";
  double ell = 1.0, tau = 1.0, eps = 0.1, sigma1 = 0.0, sigma2 = 0.0, diameter = 2.0;
  std::int64_t d1 = 4, d2 = 3;
  bool unbounded = false, as_json = false;
  zominimax::ConstantOverrides ov;
  double eta1 = 0.0, eta1_scale = 0.0;
  std::uint64_t S = 0, T = 0;
  auto* params = app.add_subcommand("params", "Print the parameters derived for a mode and problem constants");
  params->add_option("--mode", mode, "gda | gdmsa | sgda | sgdmsa")->required();
  params->add_option("--ell", ell, "Gradient-Lipschitz constant")->required();
  params->add_option("--tau", tau, "Strong-concavity modulus")->required();
  params->add_option("--eps", eps, "Target accuracy in (0,1)")->required();
  params->add_option("--d1", d1, "x dimension")->capture_default_str();
  params->add_option("--d2", d2, "y dimension")->capture_default_str();
  params->add_option("--sigma1", sigma1, "x noise level")->capture_default_str();
  params->add_option("--sigma2", sigma2, "y noise level")->capture_default_str();
  params->add_option("--diameter", diameter, "Diameter of the y constraint set")->capture_default_str();
  params->add_flag("--unbounded", unbounded, "The y constraint set is the whole space");
  params->add_option("--C_S", ov.C_S, "Outer iteration constant")->capture_default_str();
  params->add_option("--C_mu", ov.C_mu, "Smoothing radius constant")->capture_default_str();
  params->add_option("--C_T", ov.C_T, "Inner iteration constant")->capture_default_str();
  auto* eta1_opt = params->add_option("--eta1", eta1, "Step size override");
  auto* eta1_scale_opt = params->add_option("--eta1-scale", eta1_scale, "Multiplier on the step-size formula");
  auto* s_opt = params->add_option("--S", S, "Outer iteration override");
  auto* t_opt = params->add_option("--T", T, "Inner iteration override");
  params->add_flag("--json", as_json, "Emit JSON instead of text");

  auto* defaults = app.add_subcommand("defaults", "Print a configuration with every default filled in");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigFailure;
  }

  try {
    if (*run) return run_config(config_path, out_dir, false);
    if (*sweep) return run_config(config_path, out_dir, true);
    if (*verify) {
      auto cfg = zh::load_config(config_path);
      const auto report = zh::verify_estimators(cfg);
      const std::filesystem::path dir = out_dir.empty() ? zh::output_directory(cfg) : std::filesystem::path(out_dir);
      std::filesystem::create_directories(dir);
      std::ofstream(dir / "verify_report.json") << zh::to_json(report).dump(2) << "\n";
      for (const auto& c : report.checks)
        std::printf("%-5s %-9s mu=%-8g %-40s empirical=%-14.6g bound=%-14.6g\n", c.pass ? "PASS" : "FAIL",
                    c.family.c_str(), c.mu, c.name.c_str(), c.empirical, c.theoretical);
      std::printf("%s\n", report.all_pass() ? "all bounds hold" : "some bounds failed");
      return (strict && !report.all_pass()) ? kNumericalFailure : 0;
    }
    if (*params) {
      if (*eta1_opt) ov.eta1 = eta1;
      if (*eta1_scale_opt) ov.eta1_scale = eta1_scale;
      if (*s_opt) ov.S = S;
      if (*t_opt) ov.T = T;
      zominimax::ProblemConstants c{ell, tau, d1, d2, std::nullopt};
      if (!unbounded) c.diameter = diameter;
      const auto p = zominimax::derive_params(zominimax::parse_mode(mode), c, eps, sigma1, sigma2, ov);
      if (as_json)
        std::cout << zh::params_json(p).dump(2) << "\n";
      else
        std::cout << zh::print_params(p, c);
      return 0;
    }
    if (*defaults) {
      std::cout << zh::to_json(zh::ExperimentConfig{}).dump(2) << "\n";
      return 0;
    }
  } catch (const zominimax::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const zominimax::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigFailure;
  }
  return 0;
}
