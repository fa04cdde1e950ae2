#pragma once

namespace rsf {

// One futures contract seen across all regimes: F(t, x, regime) for
// t in [0, maturity]. Implementations are closed forms or grid surfaces.
class PriceSurface {
 public:
  virtual ~PriceSurface() = default;

  virtual double maturity() const = 0;
  virtual int regimes() const = 0;
  virtual double price(double t, double x, int regime) const = 0;

  // d/dx of price at fixed (t, regime).
  virtual double price_dx(double t, double x, int regime) const = 0;
};

}  // namespace rsf
