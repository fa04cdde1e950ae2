#pragma once

#include <vector>

#include "rsfutures/market_models.hpp"
#include "rsfutures/surface.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

// Futures on a regime-switching geometric Brownian spot. With
// G = diag(mu_i + sigma_i^2 / 2) the price is
//   F_i(t, x) = exp(x) * g_i(t),   g(t) = exp((G + Qt) (T - t)) * 1,
// so g_i > 0, g_i(T) = 1, and d/dx F = F.
class GbmPricer : public PriceSurface {
 public:
  GbmPricer(const RegimeModelSpec& spec, double maturity);

  Vector g_vector(double t) const;
  double g(double t, int regime) const;

  double maturity() const override { return maturity_; }
  int regimes() const override { return m_; }
  double price(double t, double x, int regime) const override;
  double price_dx(double t, double x, int regime) const override;

  // G + Qt
  const Matrix& growth_rates() const { return growth_; }

 private:
  Matrix growth_;
  double maturity_;
  int m_;
};

// The futures curve traded against one chain: one contract per regime,
// maturities strictly increasing. Construction rejects specs whose position
// map is singular (degenerate growth rates make every contract carry the
// same regime exposure).
class GbmPricerSet {
 public:
  GbmPricerSet(const RegimeModelSpec& spec, const Vector& maturities);

  int contracts() const { return static_cast<int>(pricers_.size()); }
  const GbmPricer& pricer(int contract) const;  // 1-based
  const RegimeModelSpec& spec() const { return spec_; }
  std::vector<const PriceSurface*> surfaces() const;

 private:
  RegimeModelSpec spec_;
  std::vector<GbmPricer> pricers_;
};

// Sensitivity matrix of the futures curve at (t, x, regime): first row the
// Brownian exposures sigma_i dF/dx, remaining rows the jump exposures
// F_j - F_i for j != regime in ascending order.
Matrix gamma_matrix(const GbmPricerSet& set, double t, double x, int regime);

// Closed-form ratio det Gamma(t) / det Gamma(t0) at fixed (x, regime):
// exp(-sum_k (mu_k + sigma_k^2/2 + qt_kk) (t - t0)).
double det_gamma_growth(const RegimeModelSpec& spec, double t0, double t);

}  // namespace rsf
