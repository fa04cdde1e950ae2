#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rsfutures/errors.hpp"
#include "rsfutures/pricing_gbm.hpp"
#include "rsfutures/simulate.hpp"

using namespace rsf;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

RegimeModelSpec gbm_table() {
  Matrix q(2, 2);
  q << -2, 2, 4, -4;
  return make_gbm_spec(vec2(-0.2, 0.2), vec2(0.2, 0.3), vec2(0.1, 0.3),
                       make_measure_pair(q, q));
}

RegimeModelSpec gbm_single(double mu, double sigma, double zeta) {
  Matrix q = Matrix::Zero(1, 1);
  Vector m(1), s(1), z(1);
  m << mu;
  s << sigma;
  z << zeta;
  return make_gbm_spec(m, s, z, make_measure_pair(q, q));
}

RegimePath forced_two_switches() {
  RegimePath p;
  p.t0 = 0.0;
  p.t1 = 0.6;
  p.initial_state = 2;
  p.jumps = {{0.2, 1}, {0.45, 2}};
  return p;
}

}  // namespace

TEST_CASE("simulation grid merges uniform and switch times") {
  TimeGrid g = simulation_grid(0.6, 0.1, forced_two_switches());
  // 7 uniform nodes plus switches at 0.2 (already a node) and 0.45
  REQUIRE(g.t.size() == 8);
  CHECK(g.t.front() == 0.0);
  CHECK(g.t.back() == doctest::Approx(0.6).epsilon(1e-14));
  bool has_switch = false;
  for (double t : g.t) has_switch |= t == doctest::Approx(0.45);
  CHECK(has_switch);
  for (std::size_t n = 1; n < g.t.size(); ++n) CHECK(g.t[n] > g.t[n - 1]);
  // regime is the forced path sampled right-continuously
  for (std::size_t n = 0; n + 1 < g.t.size(); ++n)
    CHECK(g.regime[n] == forced_two_switches().state_at(g.t[n]));
}

TEST_CASE("single-regime log spot has the exact Gaussian law") {
  // under P the log spot is arithmetic: dX = (mu + zeta sigma) dt + sigma dW
  const double mu = 0.05, sigma = 0.2, zeta = 0.3, horizon = 1.0;
  RegimeModelSpec spec = gbm_single(mu, sigma, zeta);
  RegimePath flat;
  flat.t0 = 0.0;
  flat.t1 = horizon;
  flat.initial_state = 1;
  TimeGrid grid = simulation_grid(horizon, 0.05, flat);
  Rng rng(99);
  const int trials = 60000;
  double sum = 0.0, sumsq = 0.0;
  for (int k = 0; k < trials; ++k) {
    Vector x = simulate_log_spot(spec, grid, 0.0, rng);
    sum += x[x.size() - 1];
    sumsq += x[x.size() - 1] * x[x.size() - 1];
  }
  const double mean = sum / trials;
  const double var = sumsq / trials - mean * mean;
  const double want_mean = (mu + zeta * sigma) * horizon;
  const double want_sd = sigma * std::sqrt(horizon);
  CHECK(std::abs(mean - want_mean) < 3.5 * want_sd / std::sqrt(trials));
  // sd of the sample variance of a Gaussian: var * sqrt(2/(n-1))
  CHECK(std::abs(var - want_sd * want_sd) <
        3.5 * want_sd * want_sd * std::sqrt(2.0 / (trials - 1)));
}

TEST_CASE("mean-reverting segments pull toward the shifted level") {
  // one long OU segment: X_T | X_0 ~ N(theta~ + (x0-theta~)e^{-kT}, ...)
  Matrix q = Matrix::Zero(1, 1);
  Vector kap(1), th(1), s(1), z(1);
  kap << 2.0;
  th << 2.5;
  s << 0.3;
  z << 0.4;
  RegimeModelSpec spec = make_xou_spec(kap, th, s, z, make_measure_pair(q, q));
  const double horizon = 0.8, x0 = 1.9;
  RegimePath flat;
  flat.t0 = 0.0;
  flat.t1 = horizon;
  flat.initial_state = 1;
  TimeGrid grid = simulation_grid(horizon, 0.04, flat);
  Rng rng(123);
  const int trials = 60000;
  double sum = 0.0;
  for (int k = 0; k < trials; ++k) {
    Vector x = simulate_log_spot(spec, grid, x0, rng);
    sum += x[x.size() - 1];
  }
  const double level = 2.5 + 0.4 * 0.3 / 2.0;  // theta + zeta sigma / kappa
  const double want = level + (x0 - level) * std::exp(-2.0 * horizon);
  const double sd = 0.3 / std::sqrt(4.0);  // stationary bound on the sd
  CHECK(std::abs(sum / trials - want) < 3.5 * sd / std::sqrt(trials));
}

TEST_CASE("marking to market ends on the spot at matching maturity") {
  RegimeModelSpec spec = gbm_table();
  GbmPricerSet set(spec, vec2(0.6, 0.8));
  TimeGrid grid = simulation_grid(0.6, 0.01, forced_two_switches());
  Rng rng(5);
  Vector x = simulate_log_spot(spec, grid, 0.0, rng);
  Matrix f = mark_to_market(set.surfaces(), grid, x);
  const Index last = grid.t.size() - 1;
  CHECK(f(last, 0) ==
        doctest::Approx(std::exp(x[last])).epsilon(1e-12));  // T1 = horizon
  CHECK(f(last, 1) > 0.0);
}

TEST_CASE("wealth moves only through position-weighted price increments") {
  RegimeModelSpec spec = gbm_table();
  GbmPricerSet set(spec, vec2(0.6, 0.8));
  PhiSolution phi = solve_phi(spec, 0.6);
  SimConfig cfg;
  cfg.horizon = 0.6;
  cfg.dt = 0.01;
  cfg.x0 = 0.1;
  cfg.initial_regime = 2;
  cfg.w0 = 1.0;
  cfg.gamma = 1.0;
  cfg.seed = 17;
  Rng rng(17);
  PathBundle b =
      run_path(spec, set.surfaces(), phi, cfg, forced_two_switches(), rng);
  CHECK(b.wealth[0] == 1.0);
  for (Index n = 1; n < b.wealth.size(); ++n) {
    double gain = 0.0;
    for (Index k = 0; k < b.futures.cols(); ++k)
      gain += b.positions(n - 1, k) * (b.futures(n, k) - b.futures(n - 1, k));
    CHECK(b.wealth[n] == doctest::Approx(b.wealth[n - 1] + gain).epsilon(1e-12));
  }
  CHECK(b.abs_det_gamma.minCoeff() > 0.0);
}

TEST_CASE("experiments are reproducible and thread-count independent") {
  RegimeModelSpec spec = gbm_table();
  GbmPricerSet set(spec, vec2(0.6, 0.8));
  PhiSolution phi = solve_phi(spec, 0.6);
  SimConfig cfg;
  cfg.horizon = 0.6;
  cfg.dt = 0.02;
  cfg.paths = 12;
  cfg.seed = 404;
  cfg.x0 = 0.0;
  cfg.initial_regime = 1;
  cfg.w0 = 1.0;
  cfg.gamma = 0.5;
  cfg.threads = 1;
  auto a = run_experiment(spec, set.surfaces(), phi, cfg);
  cfg.threads = 4;
  auto c = run_experiment(spec, set.surfaces(), phi, cfg);
  REQUIRE(a.size() == 12);
  REQUIRE(c.size() == 12);
  for (std::size_t p = 0; p < a.size(); ++p) {
    REQUIRE(a[p].log_spot.size() == c[p].log_spot.size());
    CHECK((a[p].log_spot - c[p].log_spot).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a[p].wealth - c[p].wealth).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t n = 0; n < a[p].grid.t.size(); ++n) {
      CHECK(a[p].grid.t[n] == c[p].grid.t[n]);
      if (n + 1 < a[p].grid.t.size())
        CHECK(a[p].grid.regime[n] == c[p].grid.regime[n]);
    }
  }
}

TEST_CASE("forced regime path pins every simulated trajectory") {
  RegimeModelSpec spec = gbm_table();
  GbmPricerSet set(spec, vec2(0.6, 0.8));
  PhiSolution phi = solve_phi(spec, 0.6);
  SimConfig cfg;
  cfg.horizon = 0.6;
  cfg.dt = 0.05;
  cfg.paths = 3;
  cfg.seed = 8;
  cfg.initial_regime = 2;
  cfg.w0 = 1.0;
  auto out = run_experiment(spec, set.surfaces(), phi, cfg,
                            forced_two_switches());
  for (const auto& b : out) {
    CHECK(b.grid.regime.front() == 2);
    for (std::size_t n = 0; n + 1 < b.grid.t.size(); ++n)
      CHECK(b.grid.regime[n] == forced_two_switches().state_at(b.grid.t[n]));
  }
}

TEST_CASE("direct wealth stepping converges to the position route") {
  RegimeModelSpec spec = gbm_table();
  GbmPricerSet set(spec, vec2(0.6, 0.8));
  PhiSolution phi = solve_phi(spec, 0.6);
  SimConfig cfg;
  cfg.horizon = 0.6;
  cfg.x0 = 0.0;
  cfg.initial_regime = 2;
  cfg.w0 = 1.0;
  cfg.gamma = 1.0;
  cfg.seed = 21;
  // The position route is the exact discrete-rebalancing wealth; its gap to
  // the Euler-stepped SDE is dominated by the hedge-error martingale with
  // increments ~ ((dW)^2 - dt), a strong-order-1/2 effect. Expect the
  // level-averaged sup gap to shrink by roughly sqrt(2) per halving.
  cfg.paths = 64;
  std::vector<double> avg_gap;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    cfg.dt = dt;
    auto bundles = run_experiment(spec, set.surfaces(), phi, cfg,
                                  forced_two_switches());
    double acc = 0.0;
    for (const auto& b : bundles) {
      Vector direct = euler_optimal_wealth(spec, phi, cfg.gamma, b.grid,
                                           b.log_spot, cfg.w0);
      acc += (direct - b.wealth).cwiseAbs().maxCoeff();
    }
    avg_gap.push_back(acc / cfg.paths);
  }
  for (std::size_t l = 1; l < avg_gap.size(); ++l) {
    const double order = std::log2(avg_gap[l - 1] / avg_gap[l]);
    CHECK(order > 0.3);
  }
  CHECK(avg_gap.back() < 5e-3);
}
