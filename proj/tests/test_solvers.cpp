#include "zominimax/solvers.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace zominimax;
using namespace zominimax::testing;

namespace {

ProblemConstants constants(const MinimaxProblem<double>& p) {
  return {p.ell(), p.tau(), p.d1(), p.d2(), diameter(p.set_y())};
}

bool same_trace(const RunTrace<double>& a, const RunTrace<double>& b) {
  if (a.iterates.size() != b.iterates.size()) return false;
  for (std::size_t i = 0; i < a.iterates.size(); ++i) {
    if (a.iterates[i].x != b.iterates[i].x || a.iterates[i].y != b.iterates[i].y) return false;
    if (!(a.iterates[i].counter == b.iterates[i].counter)) return false;
  }
  return true;
}

RunTrace<double> run_any(const StochasticWrapper<double>& w, const DerivedParams& p, const VectorXd& x0,
                         const VectorXd& y0, std::uint64_t seed, const RunOptions<double>& opts = {}) {
  return run_solver(w, p, x0, y0, seed, opts);
}

}  // namespace

TEST_CASE("derive_params reproduces the printed formulas") {
  const ProblemConstants c{2.0, 1.0, 4, 3, 2.0};
  const auto gda = derive_params(Mode::gda, c, 0.1);
  CHECK(gda.eta2 == 1.0 / 12.0);
  CHECK(gda.q1 == 20);
  CHECK(gda.q2 == 18);
  CHECK(gda.kappa == 2.0);
  CHECK(1.0 / gda.eta1 == doctest::Approx(8957952.0).epsilon(1e-15));
  CHECK(gda_eta1_denominator(2.0, 2.0) == 8957952.0);
  CHECK(gda.S == 3200);
  CHECK(!gda.T);
  CHECK(!gda.m1);

  const auto ms = derive_params(Mode::gdmsa, c, 0.1);
  CHECK(ms.Lg == 6.0);
  CHECK(ms.eta1 == 1.0 / 72.0);
  CHECK(ms.S == 200);
  CHECK(*ms.T == 5);  // ceil(2 ln 10)
  CHECK(ms.mu1 == doctest::Approx(0.1 / 8.0));

  const auto sg = derive_params(Mode::sgda, c, 0.1, 1.0, 0.0);
  CHECK(*sg.m1 == 8000);
  CHECK(*sg.m2 == 3600);
  CHECK(sg.x_batch() == 8000);

  CHECK(derive_params(Mode::sgdmsa, ProblemConstants{3.0, 1.0, 2, 2, 1.0}, 0.5).eta2 == 1.0 / 18.0);
}

TEST_CASE("derive_params validates inputs and applies overrides") {
  const ProblemConstants bounded{2.0, 1.0, 4, 3, 2.0};
  ProblemConstants unbounded = bounded;
  unbounded.diameter.reset();
  CHECK_THROWS_AS(derive_params(Mode::gdmsa, unbounded, 0.1), ConfigError);
  CHECK_THROWS_AS(derive_params(Mode::sgdmsa, unbounded, 0.1), ConfigError);
  CHECK_NOTHROW(derive_params(Mode::gda, unbounded, 0.1));
  CHECK_THROWS_AS(derive_params(Mode::gda, bounded, 0.0), ConfigError);
  CHECK_THROWS_AS(derive_params(Mode::gda, bounded, 1.0), ConfigError);
  CHECK_THROWS_AS(derive_params(Mode::gda, ProblemConstants{1.0, 2.0, 1, 1, 1.0}, 0.1), ConfigError);
  CHECK_THROWS_AS(derive_params(Mode::sgda, bounded, 0.1, -1.0), ConfigError);

  ConstantOverrides ov;
  ov.C_S = 0.5;
  ov.C_T = 8.0;
  ov.eta1_scale = 10.0;
  const auto p = derive_params(Mode::gdmsa, bounded, 0.1, 0, 0, ov);
  CHECK(p.S == 100);
  CHECK(*p.T == 37);
  CHECK(p.eta1 == doctest::Approx(10.0 / 72.0));
  ov.eta1 = 0.25;
  ov.S = 7;
  ov.T = 3;
  const auto q = derive_params(Mode::gdmsa, bounded, 0.1, 0, 0, ov);
  CHECK(q.eta1 == 0.25);
  CHECK(q.S == 7);
  CHECK(*q.T == 3);
  CHECK(parse_mode("zo-sgdmsa") == Mode::sgdmsa);
  CHECK_THROWS_AS(parse_mode("adam"), ConfigError);
}

TEST_CASE("S = 0 returns only the initial point") {
  const auto p = fixture(FamilyKind::trig);
  const StochasticWrapper<double> w{p, 0.5, 0.5};
  ConstantOverrides ov;
  ov.S = 0;
  for (Mode m : {Mode::gda, Mode::gdmsa, Mode::sgda, Mode::sgdmsa}) {
    const auto params = derive_params(m, constants(p), 0.1, 0.5, 0.5, ov);
    const auto tr = run_any(w, params, VectorXd::Ones(4), VectorXd::Zero(3), 1);
    REQUIRE(tr.iterates.size() == 1);
    CHECK(tr.iterates[0].x == VectorXd::Ones(4));
    CHECK(tr.final_counter() == OracleCounter{});
  }
}

TEST_CASE("ZO-GDA reaches eps-stationarity on a decoupled quadratic") {
  MatrixXd A = MatrixXd::Zero(2, 2);
  A.diagonal() << 0.5, 0.8;
  const auto p = quadratic(A, MatrixXd::Zero(2, 2), 1.0, ConstraintSet<double>::ball(2, 1.0));
  ConstantOverrides ov;
  ov.eta1 = 0.5;
  const auto params = derive_params(Mode::gda, constants(p), 0.1, 0, 0, ov);
  const auto tr = run_zo_gda(p, params, vec({1.0, -1.0}), VectorXd::Zero(2), 4);
  REQUIRE(tr.iterates.size() == params.S + 1);
  double best = INFINITY;
  for (const auto& it : tr.iterates) best = std::min(best, (A * it.x).squaredNorm());
  CHECK(best <= 0.01);
}

TEST_CASE("final counters match the closed-form totals on random schedules") {
  Rng rng(2718);
  std::uniform_int_distribution<int> S_dist(0, 12), T_dist(1, 5), b_dist(1, 25);
  const auto p = fixture(FamilyKind::quadratic);
  const StochasticWrapper<double> w{p, 0.3, 0.2};
  for (int k = 0; k < 50; ++k) {
    const Mode m = Mode(k % 4);
    auto params = derive_params(m, constants(p), 0.3, 0.3, 0.2);
    params.S = std::uint64_t(S_dist(rng));
    if (params.T) params.T = std::uint64_t(T_dist(rng));
    params.q1 = std::uint64_t(b_dist(rng));
    params.q2 = std::uint64_t(b_dist(rng));
    if (params.m1) {
      params.m1 = std::uint64_t(b_dist(rng));
      params.m2 = std::uint64_t(b_dist(rng));
    }
    const auto tr = run_any(w, params, VectorXd::Zero(4), VectorXd::Zero(3), std::uint64_t(k));
    const auto c = tr.final_counter();
    const std::uint64_t inner = params.T.value_or(1);
    CHECK(c.samples_x == params.S * params.x_batch());
    CHECK(c.samples_y == params.S * inner * params.y_batch());
    CHECK(c.raw_evals == expected_raw_evals(params));
    for (std::size_t i = 1; i < tr.iterates.size(); ++i) {
      CHECK(tr.iterates[i].counter.samples_x >= tr.iterates[i - 1].counter.samples_x);
      CHECK(tr.iterates[i].counter.samples_y >= tr.iterates[i - 1].counter.samples_y);
    }
  }
}

TEST_CASE("every y-iterate is feasible") {
  for (const auto& set : {ConstraintSet<double>::ball(3, 0.2),
                          ConstraintSet<double>::box(vec({-0.1, 0, -1}), vec({0.1, 0.5, 0}))}) {
    FixtureSpec<double> spec;
    spec.kappa = 4.0;
    const auto p = make_fixture(spec, set);
    const StochasticWrapper<double> w{p, 1.0, 1.0};
    ConstantOverrides ov;
    ov.S = 50;
    ov.eta1_scale = 10.0;
    for (Mode m : {Mode::gda, Mode::gdmsa, Mode::sgda, Mode::sgdmsa}) {
      const auto params = derive_params(m, constants(p), 0.5, 1.0, 1.0, ov);
      const auto tr = run_any(w, params, 3.0 * VectorXd::Ones(4), project(set, VectorXd::Zero(3)), 9);
      for (const auto& it : tr.iterates) CHECK(contains(set, it.y, 1e-10));
    }
  }
}

TEST_CASE("identical seeds give bit-identical traces") {
  const auto p = fixture(FamilyKind::trig);
  const StochasticWrapper<double> w{p, 0.5, 0.5};
  ConstantOverrides ov;
  ov.S = 30;
  for (Mode m : {Mode::gda, Mode::gdmsa, Mode::sgda, Mode::sgdmsa}) {
    const auto params = derive_params(m, constants(p), 0.5, 0.5, 0.5, ov);
    const VectorXd x0 = vec({1, -1, 0.5, 2});
    const auto a = run_any(w, params, x0, VectorXd::Zero(3), 77);
    const auto b = run_any(w, params, x0, VectorXd::Zero(3), 77);
    const auto c = run_any(w, params, x0, VectorXd::Zero(3), 78);
    CHECK(same_trace(a, b));
    CHECK(!same_trace(a, c));
  }
}

TEST_CASE("ZO-GDA uses the simultaneous update") {
  const auto p = fixture(FamilyKind::trig);
  ConstantOverrides ov;
  ov.S = 15;
  ov.eta1_scale = 1e5;
  const auto params = derive_params(Mode::gda, constants(p), 0.2, 0, 0, ov);
  const VectorXd x0 = vec({0.5, 1.5, -1.0, 2.0});
  const auto tr = run_zo_gda(p, params, x0, VectorXd::Zero(3), 5);

  Rng rng(5);
  OracleCounter c;
  VectorXd x = x0, y = VectorXd::Zero(3);
  for (std::uint64_t s = 0; s < params.S; ++s) {
    const VectorXd gx = estimate_gx(p, x, y, params.mu1, params.q1, rng, c).vector;
    const VectorXd gy = estimate_gy(p, x, y, params.mu2, params.q2, rng, c).vector;
    x -= params.eta1 * gx;
    y = project(p.set_y(), VectorXd(y + params.eta2 * gy));
    CHECK(tr.iterates[s + 1].x == x);
    CHECK(tr.iterates[s + 1].y == y);
  }
}

TEST_CASE("ZO-GDMSA with T = 1 descends at the updated y") {
  const auto p = fixture(FamilyKind::trig);
  ConstantOverrides ov;
  ov.S = 15;
  ov.T = 1;
  const auto params = derive_params(Mode::gdmsa, constants(p), 0.2, 0, 0, ov);
  const VectorXd x0 = vec({0.5, 1.5, -1.0, 2.0});
  const auto tr = run_zo_gdmsa(p, params, x0, VectorXd::Zero(3), 5);

  Rng rng(5);
  OracleCounter c;
  VectorXd x = x0, y = VectorXd::Zero(3);
  for (std::uint64_t s = 0; s < params.S; ++s) {
    const VectorXd gy = estimate_gy(p, x, y, params.mu2, params.q2, rng, c).vector;
    y = project(p.set_y(), VectorXd(y + params.eta2 * gy));
    const VectorXd gx = estimate_gx(p, x, y, params.mu1, params.q1, rng, c).vector;
    x -= params.eta1 * gx;
    CHECK(tr.iterates[s + 1].x == x);
    CHECK(tr.iterates[s + 1].y == y);
  }
}

TEST_CASE("zero-noise stochastic solvers follow their deterministic analogs") {
  const auto p = fixture(FamilyKind::trig);
  const StochasticWrapper<double> w{p, 0.0, 0.0};
  ConstantOverrides ov;
  ov.S = 25;
  ov.eta1_scale = 1e4;
  const VectorXd x0 = vec({0.5, 1.5, -1.0, 2.0});
  for (auto [det_mode, sto_mode] : {std::pair{Mode::gda, Mode::sgda}, std::pair{Mode::gdmsa, Mode::sgdmsa}}) {
    const auto det = derive_params(det_mode, constants(p), 0.2, 0, 0, ov);
    auto sto = derive_params(sto_mode, constants(p), 0.2, 0, 0, ov);
    sto.eta1 = det.eta1;
    sto.m1 = det.q1;
    sto.m2 = det.q2;
    const auto a = run_any(w, det, x0, VectorXd::Zero(3), 11);
    const auto b = run_any(w, sto, x0, VectorXd::Zero(3), 11);
    REQUIRE(a.iterates.size() == b.iterates.size());
    for (std::size_t i = 0; i < a.iterates.size(); ++i) {
      CHECK(a.iterates[i].x == b.iterates[i].x);
      CHECK(a.iterates[i].y == b.iterates[i].y);
      CHECK(a.iterates[i].counter.samples() == b.iterates[i].counter.samples());
    }
  }
}

TEST_CASE("ZO-SGDMSA inner residual floor shrinks with eps") {
  const auto p = fixture(FamilyKind::quadratic);
  const StochasticWrapper<double> w{p, 0.5, 0.5};
  const VectorXd x0 = vec({0.6, -0.4, 0.3, 0.8});
  const VectorXd ystar = p.y_star(x0);
  auto floor_at = [&](double eps) {
    ConstantOverrides ov;
    ov.S = 4;
    ov.eta1 = 1e-12;  // freeze x so only the y-noise remains
    const auto params = derive_params(Mode::sgdmsa, constants(p), eps, 0.5, 0.5, ov);
    double sum = 0;
    int n = 0;
    RunOptions<double> opts;
    opts.inner_observer = [&](std::uint64_t, std::uint64_t, const VectorXd& y) {
      sum += (y - ystar).squaredNorm();
      ++n;
    };
    for (std::uint64_t seed = 0; seed < 3; ++seed) run_zo_sgdmsa(w, params, x0, ystar, seed, opts);
    return sum / n;
  };
  const double coarse = floor_at(0.2), fine = floor_at(0.05);
  MESSAGE("residual floor eps=0.2: " << coarse << ", eps=0.05: " << fine);
  CHECK(fine < coarse);
}

TEST_CASE("ZO-GDMSA inner loop reaches eps^2 from the worst corner") {
  const auto p = fixture(FamilyKind::quadratic);
  const double eps = 0.1;
  ConstantOverrides ov;
  ov.S = 1;
  ov.C_T = 8.0;
  const auto params = derive_params(Mode::gdmsa, constants(p), eps, 0, 0, ov);
  Rng rng(1);
  const VectorXd x0 = 3.0 * standard_normal<double>(4, rng);
  const VectorXd ystar = p.y_star(x0);
  REQUIRE(ystar.norm() > 0);
  const VectorXd corner = -ystar.normalized();
  double mean = 0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    VectorXd last;
    RunOptions<double> opts;
    opts.inner_observer = [&](std::uint64_t, std::uint64_t, const VectorXd& y) { last = y; };
    run_zo_gdmsa(p, params, x0, corner, std::uint64_t(seed), opts);
    mean += (last - ystar).squaredNorm() / seeds;
  }
  CHECK(mean <= eps * eps);
}

TEST_CASE("descent on a decoupled quadratic") {
  MatrixXd A = MatrixXd::Zero(4, 4);
  A.diagonal() << 2.0, 1.0, 0.5, 1.5;
  const auto p = quadratic(A, MatrixXd::Zero(4, 3), 1.0, ConstraintSet<double>::ball(3, 1.0));
  CHECK(p.kappa() == 2.0);
  ConstantOverrides ov;
  ov.eta1 = 0.05;
  ov.S = 200;
  ov.C_mu = 1e-4;
  const auto params = derive_params(Mode::gda, constants(p), 0.1, 0, 0, ov);
  const auto tr = run_zo_gda(p, params, vec({1, -1, 1, -1}), VectorXd::Zero(3), 3);
  int decreases = 0;
  for (std::size_t i = 1; i < tr.iterates.size(); ++i)
    if (p.g(tr.iterates[i].x) < p.g(tr.iterates[i - 1].x)) ++decreases;
  CHECK(decreases >= int(0.9 * params.S));
}

TEST_CASE("solver errors") {
  const auto p = fixture(FamilyKind::quadratic);
  const auto gda = derive_params(Mode::gda, constants(p), 0.1);
  const auto gdmsa = derive_params(Mode::gdmsa, constants(p), 0.1);
  CHECK_THROWS_AS(run_zo_gdmsa(p, gda, VectorXd::Zero(4), VectorXd::Zero(3), 0), ConfigError);
  CHECK_THROWS_AS(run_zo_gda(p, gdmsa, VectorXd::Zero(4), VectorXd::Zero(3), 0), ConfigError);
  CHECK_THROWS_AS(run_zo_gda(p, gda, VectorXd::Zero(4), VectorXd::Constant(3, 5.0), 0), ConfigError);
  CHECK_THROWS_AS(run_zo_gda(p, gda, VectorXd::Zero(2), VectorXd::Zero(3), 0), std::invalid_argument);

  FixtureSpec<double> spec;
  const auto open = make_fixture(spec, ConstraintSet<double>::whole(3));
  CHECK_THROWS_AS(run_zo_gdmsa(open, gdmsa, VectorXd::Zero(4), VectorXd::Zero(3), 0), ConfigError);

  ConstantOverrides ov;
  ov.eta1 = 1e3;
  ov.S = 200;
  const auto wild = derive_params(Mode::gda, constants(p), 0.1, 0, 0, ov);
  CHECK_THROWS_AS(run_zo_gda(p, wild, VectorXd::Ones(4), VectorXd::Zero(3), 0), NumericalError);
}
