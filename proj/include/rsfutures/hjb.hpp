#pragma once

#include <utility>

#include "rsfutures/market_models.hpp"
#include "rsfutures/regime_chain.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

// Per-regime quadratic-utility decay rate: zeta_i^2 / 2 plus the relative
// entropy rate of the intensity change between the two measures. Always >= 0,
// and zero only when zeta_i = 0 and the measures agree on row i.
Vector alpha_vector(const Vector& zeta, const MeasurePair& measures);
Vector alpha_vector(const RegimeModelSpec& spec);

// Time component of the exponential-utility value function on [0, horizon]:
//   u_i(t, w) = -exp(-gamma w + phi_i(t)),  phi_i(horizon) = 0, phi <= 0.
// Evaluated on demand through the integrated action of exp(Qt * s) on alpha.
class PhiSolution {
 public:
  PhiSolution(GeneratorMatrix risk_neutral, Vector alpha, double horizon);

  Vector at(double t) const;
  double at(double t, int regime) const;
  double horizon() const { return horizon_; }
  int regimes() const { return static_cast<int>(alpha_.size()); }

 private:
  GeneratorMatrix risk_neutral_;
  Vector alpha_;
  double horizon_;
};

PhiSolution solve_phi(const GeneratorMatrix& risk_neutral, const Vector& alpha,
                      double horizon);
PhiSolution solve_phi(const RegimeModelSpec& spec, double horizon);

// Two-regime closed form, lt1 = qt(1,2), lt2 = qt(2,1). Requires lt1+lt2 > 0.
std::pair<double, double> phi_two_regime(double lt1, double lt2, double a1,
                                         double a2, double horizon, double t);

double value_function(const PhiSolution& phi, double t, int regime,
                      double gamma, double wealth);

double certainty_equivalent(const PhiSolution& phi, double t, int regime,
                            double gamma, double wealth);

}  // namespace rsf
