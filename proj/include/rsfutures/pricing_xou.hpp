#pragma once

#include <vector>

#include "rsfutures/market_models.hpp"
#include "rsfutures/surface.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

// Uniform grid in log spot x (right endpoint excluded, FFT layout) and in
// time on [0, maturity].
struct SpaceTimeGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_x = 0;  // number of x nodes
  int n_t = 0;  // number of time steps, n_t + 1 layers

  double dx() const { return (x_max - x_min) / n_x; }
  double x(int m) const { return x_min + m * dx(); }
  double x_last() const { return x(n_x - 1); }

  static SpaceTimeGrid validated(double x_min, double x_max, int n_x, int n_t);

  // Domain rule: [min theta - 6 s, max theta + 6 s] with s the largest
  // stationary standard deviation sigma_i / sqrt(2 kappa_i).
  static SpaceTimeGrid default_domain(const RegimeModelSpec& spec, int n_x,
                                      int n_t);
};

// Prices stored on a SpaceTimeGrid, one layer set per regime. Queries are
// cubic (4-point Lagrange) in x and linear in t; derivatives differentiate
// the cubic.
class GridSurface : public PriceSurface {
 public:
  GridSurface(SpaceTimeGrid grid, double maturity, int regimes);

  double maturity() const override { return maturity_; }
  int regimes() const override { return m_; }
  double price(double t, double x, int regime) const override;
  double price_dx(double t, double x, int regime) const override;

  const SpaceTimeGrid& grid() const { return grid_; }
  double node(int layer, int m, int regime) const;
  double& node(int layer, int m, int regime);

  // Throws UnstableParameters when an interior node is not positive.
  void require_positive_interior(const char* scheme) const;

 private:
  void locate(double t, double x, int regime, int& layer, double& tfrac,
              int& stencil, double& z) const;

  SpaceTimeGrid grid_;
  double maturity_;
  int m_;
  std::vector<std::vector<double>> values_;  // [regime][layer * n_x + m]
};

// Crank-Nicolson finite differences on the spot grid s = exp(x), regime
// coupling handled explicitly with one corrector sweep.
GridSurface price_fdm(const RegimeModelSpec& spec, double maturity,
                      const SpaceTimeGrid& grid);

// Frequency-domain time stepping: each step applies the exact per-regime
// transition as a Gaussian multiplier in frequency space plus the
// mean-reversion remap of the grid in x space, then mixes regimes by
// I + Qt dt.
GridSurface price_fst(const RegimeModelSpec& spec, double maturity,
                      const SpaceTimeGrid& grid);

// Single-regime closed form.
double xou_single_regime_price(double kappa, double theta, double sigma,
                               double maturity, double t, double x);

// When every regime shares one kappa the price separates as
// exp(e^{-kappa (T-t)} x) h_i(t); h solves a linear ODE system integrated
// backward with classic RK4 on n_t uniform steps.
class SeparableXouSurface : public PriceSurface {
 public:
  SeparableXouSurface(double kappa, double maturity, Matrix h_layers);

  double maturity() const override { return maturity_; }
  int regimes() const override { return static_cast<int>(h_.cols()); }
  double price(double t, double x, int regime) const override;
  double price_dx(double t, double x, int regime) const override;

  double h(double t, int regime) const;  // linear in t between layers

 private:
  double kappa_;
  double maturity_;
  Matrix h_;  // (n_t + 1) x regimes, layer 0 at t = 0
};

SeparableXouSurface price_identical_kappa(const RegimeModelSpec& spec,
                                          double maturity, int n_t);

}  // namespace rsf
