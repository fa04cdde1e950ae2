#pragma once

#include "rsfutures/regime_chain.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

enum class ModelKind { Gbm, Xou };

// Regime-dependent coefficients of the log spot price, together with the
// market price of risk zeta and the chain generators under both measures.
//
// Gbm:  dX = mu(i) dt + sigma(i) dZ          (pricing measure)
// Xou:  dX = kappa(i) (theta(i) - X) dt + sigma(i) dZ
//
// Under the physical measure the Brownian drift gains zeta(i) * sigma(i).
struct RegimeModelSpec {
  ModelKind kind = ModelKind::Gbm;
  Vector mu;     // Gbm only
  Vector kappa;  // Xou only
  Vector theta;  // Xou only
  Vector sigma;
  Vector zeta;
  MeasurePair measures;

  int regimes() const { return static_cast<int>(measures.size()); }
};

RegimeModelSpec make_gbm_spec(const Vector& mu, const Vector& sigma,
                              const Vector& zeta, MeasurePair measures);

RegimeModelSpec make_xou_spec(const Vector& kappa, const Vector& theta,
                              const Vector& sigma, const Vector& zeta,
                              MeasurePair measures);

// Log-price drift at (x, regime) under the pricing measure. Affine in x.
double drift_q(const RegimeModelSpec& spec, double x, int regime);

// Drift under the physical measure: drift_q + zeta * sigma.
double drift_p(const RegimeModelSpec& spec, double x, int regime);

double vol(const RegimeModelSpec& spec, int regime);

// Bounds-checked 1-based regime access, shared by the pricing modules.
Index regime_index(const RegimeModelSpec& spec, int regime);

}  // namespace rsf
