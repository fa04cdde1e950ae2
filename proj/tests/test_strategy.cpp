#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rsfutures/errors.hpp"
#include "rsfutures/pricing_xou.hpp"
#include "rsfutures/strategy.hpp"

using namespace rsf;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

RegimeModelSpec gbm_table() {
  Matrix q(2, 2), qt(2, 2);
  q << -2, 2, 4, -4;
  qt << -3, 3, 5, -5;
  return make_gbm_spec(vec2(-0.2, 0.2), vec2(0.2, 0.3), vec2(0.1, 0.3),
                       make_measure_pair(q, qt));
}

RegimeModelSpec xou_table() {
  Matrix q(2, 2);
  q << -2, 2, 4, -4;
  return make_xou_spec(vec2(1.0, 2.0), vec2(2.5, 2.7), vec2(0.2, 0.3),
                       vec2(0.1, 0.3), make_measure_pair(q, q));
}

}  // namespace

TEST_CASE("transformed exposures match the hand formula") {
  RegimeModelSpec spec = gbm_table();
  PhiSolution phi = solve_phi(spec, 1.0);
  const double gamma = 0.5, t = 0.3;
  const double ratio[] = {1.5, 1.25};  // qt_12/q_12, qt_21/q_21
  for (int i : {1, 2}) {
    TildeStrategy s = optimal_tilde(spec, phi, t, i, gamma);
    CHECK(s.brownian ==
          doctest::Approx(spec.zeta[i - 1] / gamma).epsilon(1e-14));
    const int j = 3 - i;
    const double expect =
        -(std::log(ratio[i - 1]) + phi.at(t, i) - phi.at(t, j)) / gamma;
    CHECK(s.jump[j - 1] == doctest::Approx(expect).epsilon(1e-12));
    CHECK(s.jump[i - 1] == 0.0);
  }
}

TEST_CASE("zero-intensity transitions get zero exposure by convention") {
  Matrix q(3, 3), qt(3, 3);
  q << -2, 2, 0, 1, -1, 0, 0, 0, 0;
  qt << -3, 3, 0, 2, -2, 0, 0, 0, 0;
  Vector mu(3), sigma(3), zeta(3);
  mu << -0.2, 0.0, 0.2;
  sigma << 0.2, 0.25, 0.3;
  zeta << 0.1, 0.2, 0.3;
  RegimeModelSpec spec =
      make_gbm_spec(mu, sigma, zeta, make_measure_pair(q, qt));
  PhiSolution phi = solve_phi(spec, 1.0);
  TildeStrategy s = optimal_tilde(spec, phi, 0.2, 1, 1.0);
  CHECK(s.jump[2] == 0.0);
  CHECK(s.jump[1] != 0.0);
}

TEST_CASE("stacked layout is brownian then other regimes ascending") {
  Matrix q(3, 3);
  q << -2, 1, 1, 1, -2, 1, 1, 1, -2;
  Vector mu(3), sigma(3), zeta(3);
  mu << -0.2, 0.0, 0.2;
  sigma << 0.2, 0.25, 0.3;
  zeta << 0.1, 0.2, 0.3;
  RegimeModelSpec spec = make_gbm_spec(mu, sigma, zeta, make_measure_pair(q, q));
  PhiSolution phi = solve_phi(spec, 1.0);
  TildeStrategy s = optimal_tilde(spec, phi, 0.1, 2, 1.0);
  Vector flat = s.stacked();
  REQUIRE(flat.size() == 3);
  CHECK(flat[0] == s.brownian);
  CHECK(flat[1] == s.jump[0]);
  CHECK(flat[2] == s.jump[2]);
}

TEST_CASE("generic gamma agrees with the curve formula") {
  RegimeModelSpec spec = gbm_table();
  GbmPricerSet set(spec, vec2(0.6, 0.8));
  const double t = 0.15, x = 0.3;
  for (int i : {1, 2}) {
    Matrix generic = build_gamma(set.surfaces(), spec, t, x, i);
    Matrix direct = gamma_matrix(set, t, x, i);
    CHECK((generic - direct).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("position recovery solves random systems like a dense LU") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 4);
    Matrix a(n, n);
    Vector b(n);
    for (int r = 0; r < n; ++r) {
      b[r] = normal(gen);
      for (int c = 0; c < n; ++c) a(r, c) = normal(gen);
    }
    PositionSolve sol = recover_positions(a, b);
    Vector ref = a.partialPivLu().solve(b);
    CHECK((sol.positions - ref).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(sol.det == doctest::Approx(a.determinant()).epsilon(1e-9));
  }
}

TEST_CASE("singular sensitivity matrices are rejected") {
  Matrix a(2, 2);
  a << 1, 2, 2, 4;
  Vector b = vec2(1.0, 1.0);
  CHECK_THROWS_AS(recover_positions(a, b), SingularGamma);
}

TEST_CASE("two-regime curve closed form equals the generic pipeline") {
  RegimeModelSpec spec = gbm_table();
  GbmPricerSet set(spec, vec2(0.6, 0.8));
  PhiSolution phi = solve_phi(spec, 0.6);
  const double gamma = 0.8;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ut(0.0, 0.59), ux(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double t = ut(gen), x = ux(gen);
    const int i = 1 + static_cast<int>(gen() % 2);
    Vector closed = strategy_two_regime_gbm(set, phi, t, x, i, gamma);
    TildeStrategy tilde = optimal_tilde(spec, phi, t, i, gamma);
    PositionSolve generic = recover_positions(
        build_gamma(set.surfaces(), spec, t, x, i), tilde.stacked());
    const double scale = std::max(1.0, closed.cwiseAbs().maxCoeff());
    CHECK((closed - generic.positions).cwiseAbs().maxCoeff() / scale < 1e-10);
  }
}

TEST_CASE("two-regime mean-reversion closed form equals the generic pipeline") {
  RegimeModelSpec spec = xou_table();
  PhiSolution phi = solve_phi(spec, 0.6);
  SpaceTimeGrid grid = SpaceTimeGrid::default_domain(spec, 512, 240);
  GridSurface first = price_fdm(spec, 0.6, grid);
  GridSurface second = price_fdm(spec, 0.8, grid);
  std::vector<const PriceSurface*> surfaces{&first, &second};
  const double gamma = 1.0;
  for (double t : {0.0, 0.2, 0.45}) {
    for (double x : {2.3, 2.6, 2.9}) {
      for (int i : {1, 2}) {
        Vector closed =
            strategy_two_regime_xou(spec, first, second, phi, t, x, i, gamma);
        TildeStrategy tilde = optimal_tilde(spec, phi, t, i, gamma);
        PositionSolve generic = recover_positions(
            build_gamma(surfaces, spec, t, x, i), tilde.stacked());
        CHECK((closed - generic.positions).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }
}

TEST_CASE("curve positions scale inversely with spot and risk aversion") {
  RegimeModelSpec spec = gbm_table();
  GbmPricerSet set(spec, vec2(0.6, 0.8));
  PhiSolution phi = solve_phi(spec, 0.6);
  const double t = 0.2, x = 0.3;
  Vector base = strategy_two_regime_gbm(set, phi, t, x, 1, 1.0);
  Vector shifted = strategy_two_regime_gbm(set, phi, t, x + 1.0, 1, 1.0);
  Vector averse = strategy_two_regime_gbm(set, phi, t, x, 1, 2.0);
  CHECK((shifted * std::exp(1.0) - base).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((averse * 2.0 - base).cwiseAbs().maxCoeff() < 1e-12);
}
