#include "rsfutures/pricing_gbm.hpp"

#include <cmath>
#include <string>

#include "rsfutures/errors.hpp"
#include "rsfutures/numerics.hpp"

namespace rsf {

GbmPricer::GbmPricer(const RegimeModelSpec& spec, double maturity)
    : maturity_(maturity), m_(spec.regimes()) {
  if (spec.kind != ModelKind::Gbm)
    throw ValidationError("GbmPricer: spec is not a GBM model");
  if (!(maturity > 0.0))
    throw ValidationError("GbmPricer: maturity must be positive");
  growth_ = spec.measures.risk_neutral.rates;
  growth_.diagonal() +=
      (spec.mu.array() + 0.5 * spec.sigma.array().square()).matrix();
}

Vector GbmPricer::g_vector(double t) const {
  if (t > maturity_ + 1e-12)
    throw TimeBeyondMaturity("g_vector: t exceeds maturity " +
                             std::to_string(maturity_));
  const double tau = std::max(maturity_ - t, 0.0);
  if (m_ == 1) {
    Vector g(1);
    g[0] = std::exp(growth_(0, 0) * tau);
    return g;
  }
  return matrix_exponential<double>(growth_ * tau) * Vector::Ones(m_);
}

double GbmPricer::g(double t, int regime) const {
  if (regime < 1 || regime > m_)
    throw RegimeOutOfRange("g: regime out of range");
  return g_vector(t)[regime - 1];
}

double GbmPricer::price(double t, double x, int regime) const {
  return std::exp(x) * g(t, regime);
}

double GbmPricer::price_dx(double t, double x, int regime) const {
  return price(t, x, regime);
}

GbmPricerSet::GbmPricerSet(const RegimeModelSpec& spec,
                           const Vector& maturities)
    : spec_(spec) {
  const int m = spec.regimes();
  if (maturities.size() != m)
    throw ValidationError("GbmPricerSet: need one maturity per regime");
  for (Index k = 0; k + 1 < maturities.size(); ++k)
    if (!(maturities[k] < maturities[k + 1]))
      throw ValidationError("GbmPricerSet: maturities must strictly increase");
  pricers_.reserve(m);
  for (Index k = 0; k < maturities.size(); ++k)
    pricers_.emplace_back(spec, maturities[k]);

  // The determinant evolves by a deterministic exponential factor, so one
  // evaluation settles invertibility for the whole horizon. Check at the
  // first maturity, where the short contract's jump exposures vanish.
  for (int i = 1; i <= m; ++i) {
    const Matrix gam = gamma_matrix(*this, maturities[0], 0.0, i);
    double rows = 1.0;
    for (Index r = 0; r < gam.rows(); ++r) rows *= gam.row(r).norm();
    if (std::abs(gam.determinant()) <= 1e-10 * rows)
      throw SingularGamma(
          "GbmPricerSet: futures sensitivities are singular from regime " +
          std::to_string(i));
  }
}

const GbmPricer& GbmPricerSet::pricer(int contract) const {
  if (contract < 1 || contract > contracts())
    throw RegimeOutOfRange("GbmPricerSet: contract index out of range");
  return pricers_[contract - 1];
}

std::vector<const PriceSurface*> GbmPricerSet::surfaces() const {
  std::vector<const PriceSurface*> out;
  out.reserve(pricers_.size());
  for (const auto& p : pricers_) out.push_back(&p);
  return out;
}

Matrix gamma_matrix(const GbmPricerSet& set, double t, double x, int regime) {
  const RegimeModelSpec& spec = set.spec();
  const Index i = regime_index(spec, regime);
  const int m = set.contracts();
  const double ex = std::exp(x);
  Matrix gam(m, m);
  for (int k = 1; k <= m; ++k) {
    const Vector g = set.pricer(k).g_vector(t);
    gam(0, k - 1) = spec.sigma[i] * ex * g[i];
    Index r = 1;
    for (Index j = 0; j < m; ++j) {
      if (j == i) continue;
      gam(r, k - 1) = ex * (g[j] - g[i]);
      ++r;
    }
  }
  return gam;
}

double det_gamma_growth(const RegimeModelSpec& spec, double t0, double t) {
  if (spec.kind != ModelKind::Gbm)
    throw ValidationError("det_gamma_growth: spec is not a GBM model");
  const double rate =
      (spec.mu.array() + 0.5 * spec.sigma.array().square()).sum() +
      spec.measures.risk_neutral.rates.diagonal().sum();
  return std::exp(-rate * (t - t0));
}

}  // namespace rsf
