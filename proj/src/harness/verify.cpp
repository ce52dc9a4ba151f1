#include "zominimax/harness/verify.hpp"

#include "zominimax/params.hpp"
#include "zominimax/smoothing.hpp"

#include <cmath>

namespace zominimax::harness {

using nlohmann::json;

namespace {

enum class Block { x, y };

struct MomentStats {
  Eigen::VectorXd mean;
  double max_z = 0.0;
  double mean_sq_norm = 0.0;
};

// Accumulates per-coordinate mean/variance and the mean squared norm of `draw()`.
template <typename Draw>
MomentStats accumulate(Eigen::Index dim, std::uint64_t n, const Eigen::VectorXd& target, Draw&& draw) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(dim);
  double norm_sq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Eigen::VectorXd g = draw();
    sum += g;
    sum_sq += g.cwiseAbs2();
    norm_sq += g.squaredNorm();
  }
  MomentStats s;
  const double dn = double(n);
  s.mean = sum / dn;
  s.mean_sq_norm = norm_sq / dn;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double var = (sum_sq[k] - dn * s.mean[k] * s.mean[k]) / (dn - 1.0);
    const double se = std::sqrt(std::max(var, 0.0) / dn);
    const double dev = std::abs(s.mean[k] - target[k]);
    const double z = se > 0.0 ? dev / se : (dev == 0.0 ? 0.0 : INFINITY);
    s.max_z = std::max(s.max_z, z);
  }
  return s;
}

std::uint64_t check_stream(std::size_t family, std::size_t mu, Block b, int check) {
  return (std::uint64_t(family) << 24) | (std::uint64_t(mu) << 16) | (std::uint64_t(b == Block::y) << 8) |
         std::uint64_t(check);
}

}  // namespace

bool EstimatorReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

const BoundCheck& EstimatorReport::find(const std::string& family, double mu, const std::string& name) const {
  for (const auto& c : checks)
    if (c.family == family && c.mu == mu && c.name == name) return c;
  throw std::out_of_range("no check " + name + " for " + family);
}

EstimatorReport verify_estimators(const ExperimentConfig& cfg) {
  const VerifyConfig& v = cfg.verify;
  const double sigma1 = v.sigma1.value_or(cfg.problem.sigma1);
  const double sigma2 = v.sigma2.value_or(cfg.problem.sigma2);
  const std::uint64_t n = v.samples;
  EstimatorReport report;

  for (std::size_t fi = 0; fi < v.families.size(); ++fi) {
    const auto problem = build_problem(cfg.problem, v.families[fi]);
    const StochasticWrapper<double> wrapper{problem, sigma1, sigma2};
    const std::string fam(to_string(v.families[fi]));
    const double ell = problem.ell();

    Rng point_rng(mix_seed(cfg.seed, 1000 + fi));
    const Eigen::VectorXd x = standard_normal<double>(problem.d1(), point_rng);
    const Eigen::VectorXd y =
        project(problem.set_y(), Eigen::VectorXd(0.5 * standard_normal<double>(problem.d2(), point_rng)));

    auto add = [&](double mu, std::string name, double empirical, double theoretical, bool pass) {
      report.checks.push_back({fam, mu, std::move(name), empirical, theoretical, pass});
    };

    for (std::size_t mi = 0; mi < v.mu.size(); ++mi) {
      const double mu = v.mu[mi];
      for (Block b : {Block::x, Block::y}) {
        const std::string tag = b == Block::x ? "x" : "y";
        const double dim = double(b == Block::x ? problem.d1() : problem.d2());
        const double sigma = b == Block::x ? sigma1 : sigma2;
        const Eigen::VectorXd grad = b == Block::x ? problem.grad_x(x, y) : problem.grad_y(x, y);
        const Eigen::VectorXd smoothed_grad =
            b == Block::x ? smoothed_grad_x(problem, x, y, mu) : smoothed_grad_y(problem, x, y, mu);
        const double grad_sq = grad.squaredNorm();

        auto det = [&](std::uint64_t batch, Rng& rng) {
          OracleCounter c;
          return b == Block::x ? estimate_gx(problem, x, y, mu, batch, rng, c).vector
                               : estimate_gy(problem, x, y, mu, batch, rng, c).vector;
        };
        auto sto = [&](std::uint64_t batch, Rng& rng) {
          OracleCounter c;
          return b == Block::x ? estimate_gx_stochastic(wrapper, x, y, mu, batch, rng, c).vector
                               : estimate_gy_stochastic(wrapper, x, y, mu, batch, rng, c).vector;
        };

        // Reference bias and value gap of the smoothed function.
        const double bias_sq = (smoothed_grad - grad).squaredNorm();
        const double bias_bound = bounds::gradient_bias_sq(mu, ell, dim);
        add(mu, "bias_sq_" + tag, bias_sq, bias_bound, bias_sq <= bias_bound);
        const double fval = problem.value(x, y);
        const double gap = std::abs((b == Block::x ? smoothed_value_x(problem, x, y, mu)
                                                   : smoothed_value_y(problem, x, y, mu)) -
                                    fval);
        const double gap_bound = bounds::value_gap(mu, ell, dim);
        add(mu, "value_gap_" + tag, gap, gap_bound, gap <= gap_bound);

        // Single-sample estimator: unbiasedness for grad f_mu and second moment.
        {
          Rng rng(mix_seed(cfg.seed, check_stream(fi, mi, b, 1)));
          const auto s = accumulate(Eigen::Index(dim), n, smoothed_grad, [&] { return det(1, rng); });
          add(mu, "unbiased_z_" + tag, s.max_z, kMaxZScore, s.max_z <= kMaxZScore);
          const double bound = bounds::single_second_moment(grad_sq, mu, ell, dim);
          add(mu, "second_moment_single_" + tag, s.mean_sq_norm, bound, s.mean_sq_norm <= bound);
        }
        // Mini-batch at q = 2(d+6).
        {
          const std::uint64_t q = deterministic_batch(std::int64_t(dim));
          Rng rng(mix_seed(cfg.seed, check_stream(fi, mi, b, 2)));
          const auto s = accumulate(Eigen::Index(dim), std::max<std::uint64_t>(2, n / q), smoothed_grad,
                                    [&] { return det(q, rng); });
          const double bound = bounds::batch_second_moment(grad_sq, mu, ell, dim);
          add(mu, "second_moment_batch_" + tag, s.mean_sq_norm, bound, s.mean_sq_norm <= bound);
        }
        // Stochastic single-sample, on the same stream as the deterministic single-sample check.
        {
          Rng rng(mix_seed(cfg.seed, check_stream(fi, mi, b, 1)));
          const auto s = accumulate(Eigen::Index(dim), n, smoothed_grad, [&] { return sto(1, rng); });
          add(mu, "stochastic_unbiased_z_" + tag, s.max_z, kMaxZScore, s.max_z <= kMaxZScore);
          const double bound = bounds::stochastic_single_second_moment(grad_sq, sigma, mu, ell, dim);
          add(mu, "stochastic_second_moment_single_" + tag, s.mean_sq_norm, bound, s.mean_sq_norm <= bound);
        }
        // Stochastic mini-batch at |M| = 4(d+6)(sigma^2+1)/eps^2.
        {
          const std::uint64_t m = stochastic_batch(std::int64_t(dim), sigma, v.eps);
          Rng rng(mix_seed(cfg.seed, check_stream(fi, mi, b, 3)));
          const auto s = accumulate(Eigen::Index(dim), std::max<std::uint64_t>(2, n / m), smoothed_grad,
                                    [&] { return sto(m, rng); });
          const double bound = bounds::stochastic_batch_second_moment(grad_sq, v.eps, mu, ell, dim);
          add(mu, "stochastic_second_moment_batch_" + tag, s.mean_sq_norm, bound, s.mean_sq_norm <= bound);
        }
      }
    }

    // Smoothing bias of grad_x grows like mu^2: compare the extreme radii.
    if (v.mu.size() >= 2 && problem.is_quadratic() == false) {
      const double lo = v.mu.front(), hi = v.mu.back();
      const double b_lo = (smoothed_grad_x(problem, x, y, lo) - problem.grad_x(x, y)).norm();
      const double b_hi = (smoothed_grad_x(problem, x, y, hi) - problem.grad_x(x, y)).norm();
      const double ratio = b_hi / b_lo;
      const double expected = (hi / lo) * (hi / lo);
      add(hi, "bias_mu_squared_scaling", ratio, expected, ratio >= expected / 2.0 && ratio <= expected * 2.0);
    }
  }
  return report;
}

json to_json(const EstimatorReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"family", c.family},
                      {"mu", c.mu},
                      {"name", c.name},
                      {"empirical", c.empirical},
                      {"theoretical", c.theoretical},
                      {"pass", c.pass}});
  return json{{"all_pass", report.all_pass()}, {"checks", checks}};
}

}  // namespace zominimax::harness
