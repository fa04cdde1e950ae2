#include "rsfutures/market_models.hpp"

#include <string>
#include <utility>

#include "rsfutures/errors.hpp"

namespace rsf {

namespace {

void require_size(const Vector& v, Index m, const char* name) {
  if (v.size() != m)
    throw ValidationError(std::string(name) + " must have one entry per regime");
  if (!v.allFinite())
    throw ValidationError(std::string(name) + " has non-finite entries");
}

void require_positive(const Vector& v, const char* name) {
  if ((v.array() <= 0.0).any())
    throw ValidationError(std::string(name) + " entries must be positive");
}

}  // namespace

RegimeModelSpec make_gbm_spec(const Vector& mu, const Vector& sigma,
                              const Vector& zeta, MeasurePair measures) {
  const Index m = measures.size();
  require_size(mu, m, "mu");
  require_size(sigma, m, "sigma");
  require_size(zeta, m, "zeta");
  require_positive(sigma, "sigma");
  RegimeModelSpec spec;
  spec.kind = ModelKind::Gbm;
  spec.mu = mu;
  spec.sigma = sigma;
  spec.zeta = zeta;
  spec.measures = std::move(measures);
  return spec;
}

RegimeModelSpec make_xou_spec(const Vector& kappa, const Vector& theta,
                              const Vector& sigma, const Vector& zeta,
                              MeasurePair measures) {
  const Index m = measures.size();
  require_size(kappa, m, "kappa");
  require_size(theta, m, "theta");
  require_size(sigma, m, "sigma");
  require_size(zeta, m, "zeta");
  require_positive(kappa, "kappa");
  require_positive(sigma, "sigma");
  RegimeModelSpec spec;
  spec.kind = ModelKind::Xou;
  spec.kappa = kappa;
  spec.theta = theta;
  spec.sigma = sigma;
  spec.zeta = zeta;
  spec.measures = std::move(measures);
  return spec;
}

Index regime_index(const RegimeModelSpec& spec, int regime) {
  if (regime < 1 || regime > spec.regimes())
    throw RegimeOutOfRange("regime " + std::to_string(regime) +
                           " outside 1.." + std::to_string(spec.regimes()));
  return static_cast<Index>(regime - 1);
}

double drift_q(const RegimeModelSpec& spec, double x, int regime) {
  const Index i = regime_index(spec, regime);
  if (spec.kind == ModelKind::Gbm) return spec.mu[i];
  return spec.kappa[i] * (spec.theta[i] - x);
}

double drift_p(const RegimeModelSpec& spec, double x, int regime) {
  const Index i = regime_index(spec, regime);
  return drift_q(spec, x, regime) + spec.zeta[i] * spec.sigma[i];
}

double vol(const RegimeModelSpec& spec, int regime) {
  return spec.sigma[regime_index(spec, regime)];
}

}  // namespace rsf
