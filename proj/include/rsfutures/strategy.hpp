#pragma once

#include <vector>

#include "rsfutures/hjb.hpp"
#include "rsfutures/market_models.hpp"
#include "rsfutures/pricing_gbm.hpp"
#include "rsfutures/surface.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

// Transformed exposures chosen by the optimal investor in regime i:
// `brownian` multiplies dZ, `jump[j-1]` multiplies the jump martingale of a
// switch into regime j. The entry for the current regime is zero, as are
// entries for transitions with zero intensity under both measures.
struct TildeStrategy {
  int regime = 1;
  double brownian = 0.0;
  Vector jump;

  // (brownian, jump_j for j != regime ascending), the layout matched by the
  // rows of the sensitivity matrix.
  Vector stacked() const;
};

TildeStrategy optimal_tilde(const RegimeModelSpec& spec, const PhiSolution& phi,
                            double t, int regime, double gamma);

// Same, with phi(t) already evaluated (hot loops).
TildeStrategy optimal_tilde(const RegimeModelSpec& spec, const Vector& phi_at_t,
                            int regime, double gamma);

// Sensitivity matrix of the futures curve: row 0 holds sigma_i dF^{(k)}/dx,
// row r >= 1 the jump exposure F_j^{(k)} - F_i^{(k)} for the r-th other
// regime j in ascending order. One column per contract.
Matrix build_gamma(const std::vector<const PriceSurface*>& surfaces,
                   const RegimeModelSpec& spec, double t, double x, int regime);

struct PositionSolve {
  Vector positions;
  double det = 0.0;
};

// Gaussian elimination with partial pivoting; rejects matrices whose
// determinant is below 1e-12 times the product of row norms.
PositionSolve recover_positions(const Matrix& gamma, const Vector& tilde);

// Two-contract closed forms, equal to the generic pipeline.
Vector strategy_two_regime_gbm(const GbmPricerSet& set, const PhiSolution& phi,
                               double t, double x, int regime, double gamma);

Vector strategy_two_regime_xou(const RegimeModelSpec& spec,
                               const PriceSurface& first,
                               const PriceSurface& second,
                               const PhiSolution& phi, double t, double x,
                               int regime, double gamma);

}  // namespace rsf
