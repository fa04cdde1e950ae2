#include "rsfutures/hjb.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rsfutures/errors.hpp"
#include "rsfutures/numerics.hpp"

namespace rsf {

Vector alpha_vector(const Vector& zeta, const MeasurePair& measures) {
  const Index m = measures.size();
  if (zeta.size() != m)
    throw ValidationError("alpha_vector: zeta must have one entry per regime");
  const Matrix& q = measures.physical.rates;
  const Matrix& qt = measures.risk_neutral.rates;
  Vector alpha(m);
  for (Index i = 0; i < m; ++i) {
    double a = 0.5 * zeta[i] * zeta[i];
    for (Index j = 0; j < m; ++j) {
      if (j == i) continue;
      const double pij = q(i, j);
      const double rij = qt(i, j);
      if (pij == 0.0 && rij == 0.0) continue;
      if (pij == 0.0 || rij == 0.0)
        throw MeasureInequivalence(
            "alpha_vector: intensity (" + std::to_string(i + 1) + "," +
            std::to_string(j + 1) + ") vanishes under only one measure");
      a += rij * std::log(rij / pij) - rij + pij;
    }
    alpha[i] = a;
  }
  return alpha;
}

Vector alpha_vector(const RegimeModelSpec& spec) {
  return alpha_vector(spec.zeta, spec.measures);
}

PhiSolution::PhiSolution(GeneratorMatrix risk_neutral, Vector alpha,
                         double horizon)
    : risk_neutral_(std::move(risk_neutral)),
      alpha_(std::move(alpha)),
      horizon_(horizon) {
  if (risk_neutral_.size() != alpha_.size())
    throw ValidationError("PhiSolution: alpha length mismatch");
  if (!(horizon_ > 0.0))
    throw ValidationError("PhiSolution: horizon must be positive");
  if ((alpha_.array() < 0.0).any())
    throw ValidationError("PhiSolution: alpha entries must be >= 0");
}

Vector PhiSolution::at(double t) const {
  if (!(t >= -1e-12 && t <= horizon_ + 1e-12))
    throw ValidationError("phi: time outside [0, horizon]");
  const double tau = std::min(std::max(horizon_ - t, 0.0), horizon_);
  return -integrated_matexp_action<double>(risk_neutral_.rates, alpha_, tau);
}

double PhiSolution::at(double t, int regime) const {
  if (regime < 1 || regime > regimes())
    throw RegimeOutOfRange("phi: regime out of range");
  return at(t)[regime - 1];
}

PhiSolution solve_phi(const GeneratorMatrix& risk_neutral, const Vector& alpha,
                      double horizon) {
  return PhiSolution(risk_neutral, alpha, horizon);
}

PhiSolution solve_phi(const RegimeModelSpec& spec, double horizon) {
  return PhiSolution(spec.measures.risk_neutral, alpha_vector(spec), horizon);
}

std::pair<double, double> phi_two_regime(double lt1, double lt2, double a1,
                                         double a2, double horizon, double t) {
  const double lam = lt1 + lt2;
  if (!(lam > 0.0))
    throw DegenerateRates("phi_two_regime: qt(1,2) + qt(2,1) must be > 0");
  const double tau = horizon - t;
  const double bar = lt2 * a1 + lt1 * a2;
  const double decay = (1.0 - std::exp(-lam * tau)) / lam;
  const double phi1 = -(bar * tau + lt1 * (a1 - a2) * decay) / lam;
  const double phi2 = -(bar * tau + lt2 * (a2 - a1) * decay) / lam;
  return {phi1, phi2};
}

double value_function(const PhiSolution& phi, double t, int regime,
                      double gamma, double wealth) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  return -std::exp(-gamma * wealth + phi.at(t, regime));
}

double certainty_equivalent(const PhiSolution& phi, double t, int regime,
                            double gamma, double wealth) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  return wealth - phi.at(t, regime) / gamma;
}

}  // namespace rsf
