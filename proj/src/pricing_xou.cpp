#include "rsfutures/pricing_xou.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "rsfutures/errors.hpp"
#include "rsfutures/numerics.hpp"

namespace rsf {

namespace {

void require_xou(const RegimeModelSpec& spec, const char* where) {
  if (spec.kind != ModelKind::Xou)
    throw ValidationError(std::string(where) + ": spec is not an OU model");
}

// Lagrange cubic on nodes {0,1,2,3} evaluated at z, and its derivative.
void cubic_weights(double z, double w[4]) {
  w[0] = -(z - 1.0) * (z - 2.0) * (z - 3.0) / 6.0;
  w[1] = z * (z - 2.0) * (z - 3.0) / 2.0;
  w[2] = -z * (z - 1.0) * (z - 3.0) / 2.0;
  w[3] = z * (z - 1.0) * (z - 2.0) / 6.0;
}

void cubic_weights_dz(double z, double w[4]) {
  w[0] = -((z - 2.0) * (z - 3.0) + (z - 1.0) * (z - 3.0) +
           (z - 1.0) * (z - 2.0)) /
         6.0;
  w[1] =
      ((z - 2.0) * (z - 3.0) + z * (z - 3.0) + z * (z - 2.0)) / 2.0;
  w[2] =
      -((z - 1.0) * (z - 3.0) + z * (z - 3.0) + z * (z - 1.0)) / 2.0;
  w[3] = ((z - 1.0) * (z - 2.0) + z * (z - 1.0) + z * (z - 2.0)) / 6.0;
}

}  // namespace

SpaceTimeGrid SpaceTimeGrid::validated(double x_min, double x_max, int n_x,
                                       int n_t) {
  if (!(x_min < x_max))
    throw ValidationError("grid: x_min must be smaller than x_max");
  if (n_x < 8)
    throw GridTooCoarse("grid: need at least 8 spatial nodes, got " +
                        std::to_string(n_x));
  if (n_t < 1) throw ValidationError("grid: n_t must be >= 1");
  return SpaceTimeGrid{x_min, x_max, n_x, n_t};
}

SpaceTimeGrid SpaceTimeGrid::default_domain(const RegimeModelSpec& spec,
                                            int n_x, int n_t) {
  require_xou(spec, "default_domain");
  const double band =
      6.0 *
      (spec.sigma.array() / (2.0 * spec.kappa.array()).sqrt()).maxCoeff();
  return validated(spec.theta.minCoeff() - band, spec.theta.maxCoeff() + band,
                   n_x, n_t);
}

GridSurface::GridSurface(SpaceTimeGrid grid, double maturity, int regimes)
    : grid_(grid), maturity_(maturity), m_(regimes) {
  if (!(maturity > 0.0))
    throw ValidationError("GridSurface: maturity must be positive");
  if (regimes < 1) throw ValidationError("GridSurface: need >= 1 regime");
  values_.assign(m_, std::vector<double>(
                         static_cast<std::size_t>(grid_.n_t + 1) * grid_.n_x,
                         0.0));
}

double GridSurface::node(int layer, int m, int regime) const {
  return values_[regime - 1][static_cast<std::size_t>(layer) * grid_.n_x + m];
}

double& GridSurface::node(int layer, int m, int regime) {
  return values_[regime - 1][static_cast<std::size_t>(layer) * grid_.n_x + m];
}

void GridSurface::require_positive_interior(const char* scheme) const {
  for (int i = 1; i <= m_; ++i)
    for (int n = 0; n <= grid_.n_t; ++n)
      for (int m = 1; m + 1 < grid_.n_x; ++m)
        if (!(node(n, m, i) > 0.0))
          throw UnstableParameters(std::string(scheme) +
                                   ": non-positive price at interior node");
}

void GridSurface::locate(double t, double x, int regime, int& layer,
                         double& tfrac, int& stencil, double& z) const {
  if (regime < 1 || regime > m_)
    throw RegimeOutOfRange("surface: regime out of range");
  if (t > maturity_ + 1e-12)
    throw TimeBeyondMaturity("surface: t exceeds maturity");
  if (!(t >= -1e-12)) throw ValidationError("surface: t must be >= 0");
  const double tol = 1e-9 * grid_.dx();
  if (x < grid_.x_min - tol || x > grid_.x_last() + tol)
    throw OutOfGrid("surface: x = " + std::to_string(x) +
                    " outside [" + std::to_string(grid_.x_min) + ", " +
                    std::to_string(grid_.x_last()) + "]");

  const double tc = std::clamp(t, 0.0, maturity_);
  const double u_t = tc / maturity_ * grid_.n_t;
  layer = std::min(static_cast<int>(u_t), grid_.n_t - 1);
  tfrac = u_t - layer;

  const double xc = std::clamp(x, grid_.x_min, grid_.x_last());
  const double u_x = (xc - grid_.x_min) / grid_.dx();
  int cell = std::min(static_cast<int>(u_x), grid_.n_x - 2);
  stencil = std::clamp(cell - 1, 0, grid_.n_x - 4);
  z = u_x - stencil;
}

double GridSurface::price(double t, double x, int regime) const {
  int layer, stencil;
  double tfrac, z;
  locate(t, x, regime, layer, tfrac, stencil, z);
  double w[4];
  cubic_weights(z, w);
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < 4; ++k) {
    lo += w[k] * node(layer, stencil + k, regime);
    hi += w[k] * node(layer + 1, stencil + k, regime);
  }
  return (1.0 - tfrac) * lo + tfrac * hi;
}

double GridSurface::price_dx(double t, double x, int regime) const {
  int layer, stencil;
  double tfrac, z;
  locate(t, x, regime, layer, tfrac, stencil, z);
  double w[4];
  cubic_weights_dz(z, w);
  double lo = 0.0, hi = 0.0;
  for (int k = 0; k < 4; ++k) {
    lo += w[k] * node(layer, stencil + k, regime);
    hi += w[k] * node(layer + 1, stencil + k, regime);
  }
  return ((1.0 - tfrac) * lo + tfrac * hi) / grid_.dx();
}

GridSurface price_fdm(const RegimeModelSpec& spec, double maturity,
                      const SpaceTimeGrid& grid_in) {
  require_xou(spec, "price_fdm");
  const SpaceTimeGrid grid = SpaceTimeGrid::validated(
      grid_in.x_min, grid_in.x_max, grid_in.n_x, grid_in.n_t);
  const int m = spec.regimes();
  const int n = grid.n_x;
  const double dt = maturity / grid.n_t;
  const Matrix& qt = spec.measures.risk_neutral.rates;

  GridSurface surf(grid, maturity, m);

  Vector s(n);
  for (int k = 0; k < n; ++k) s[k] = std::exp(grid.x(k));

  // Rows of the spatial operator per regime: value at node k is
  // al[k] F_{k-1} + ad[k] F_k + au[k] F_{k+1}.
  std::vector<Vector> al(m, Vector::Zero(n)), ad(m, Vector::Zero(n)),
      au(m, Vector::Zero(n));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      const double drift =
          (spec.kappa[i] * (spec.theta[i] - grid.x(k)) +
           0.5 * spec.sigma[i] * spec.sigma[i]) *
          s[k];
      if (k == 0) {
        const double hp = s[1] - s[0];
        ad[i][k] = -drift / hp;
        au[i][k] = drift / hp;
      } else if (k == n - 1) {
        const double hm = s[n - 1] - s[n - 2];
        al[i][k] = -drift / hm;
        ad[i][k] = drift / hm;
      } else {
        const double hm = s[k] - s[k - 1];
        const double hp = s[k + 1] - s[k];
        const double diff = 0.5 * spec.sigma[i] * spec.sigma[i] * s[k] * s[k];
        al[i][k] = drift * (-hp / (hm * (hm + hp))) + diff * (2.0 / (hm * (hm + hp)));
        ad[i][k] = drift * ((hp - hm) / (hm * hp)) + diff * (-2.0 / (hm * hp));
        au[i][k] = drift * (hm / (hp * (hm + hp))) + diff * (2.0 / (hp * (hm + hp)));
      }
    }
  }

  auto apply = [&](int i, const Vector& f) {
    Vector out(n);
    for (int k = 0; k < n; ++k) {
      double v = ad[i][k] * f[k];
      if (k > 0) v += al[i][k] * f[k - 1];
      if (k + 1 < n) v += au[i][k] * f[k + 1];
      out[k] = v;
    }
    return out;
  };

  auto solve_left = [&](int i, const Vector& rhs) {
    TridiagonalSystem sys;
    sys.lower = Vector(n - 1);
    sys.upper = Vector(n - 1);
    sys.diag = Vector(n);
    sys.rhs = rhs;
    for (int k = 0; k < n; ++k) {
      sys.diag[k] = 1.0 - 0.5 * dt * ad[i][k];
      if (k > 0) sys.lower[k - 1] = -0.5 * dt * al[i][k];
      if (k + 1 < n) sys.upper[k] = -0.5 * dt * au[i][k];
    }
    return solve_tridiagonal(sys);
  };

  std::vector<Vector> known(m);
  for (int i = 0; i < m; ++i) {
    known[i] = s;
    for (int k = 0; k < n; ++k) surf.node(grid.n_t, k, i + 1) = s[k];
  }

  auto coupling = [&](const std::vector<Vector>& f) {
    std::vector<Vector> c(m, Vector::Zero(n));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (qt(i, j) != 0.0) c[i] += qt(i, j) * f[j];
    return c;
  };

  std::vector<Vector> pred(m), next(m);
  for (int layer = grid.n_t - 1; layer >= 0; --layer) {
    const auto c_known = coupling(known);
    std::vector<Vector> base(m);
    for (int i = 0; i < m; ++i)
      base[i] = known[i] + 0.5 * dt * apply(i, known[i]);
    for (int i = 0; i < m; ++i)
      pred[i] = solve_left(i, base[i] + dt * c_known[i]);
    const auto c_pred = coupling(pred);
    for (int i = 0; i < m; ++i) {
      next[i] = solve_left(i, base[i] + 0.5 * dt * (c_known[i] + c_pred[i]));
      for (int k = 0; k < n; ++k) surf.node(layer, k, i + 1) = next[i][k];
    }
    known.swap(next);
  }

  surf.require_positive_interior("price_fdm");
  return surf;
}

GridSurface price_fst(const RegimeModelSpec& spec, double maturity,
                      const SpaceTimeGrid& grid_in) {
  require_xou(spec, "price_fst");
  const SpaceTimeGrid grid = SpaceTimeGrid::validated(
      grid_in.x_min, grid_in.x_max, grid_in.n_x, grid_in.n_t);
  const int n = grid.n_x;
  if (n & (n - 1))
    throw LengthNotPowerOfTwo("price_fst: n_x = " + std::to_string(n) +
                              " is not a power of two");
  const int m = spec.regimes();
  const double dt = maturity / grid.n_t;
  const Matrix& qt = spec.measures.risk_neutral.rates;
  for (int i = 0; i < m; ++i)
    if (1.0 + qt(i, i) * dt < 0.0)
      throw StepTooLarge("price_fst: 1 + qt(i,i) dt negative for regime " +
                         std::to_string(i + 1));

  GridSurface surf(grid, maturity, m);

  const double dx = grid.dx();
  const double base_freq = 2.0 * std::numbers::pi / (grid.x_max - grid.x_min);

  // One backward step per regime applies the exact transition over dt: the
  // characteristic-factor solution splits into a Gaussian multiplier in
  // frequency space and the mean-reversion pull of the grid toward theta,
  // which is read back in x space with cubic interpolation. Resampling in x
  // keeps every read inside the domain, so the periodic wrap of the payoff
  // never leaks into the interior.
  struct StepPlan {
    Vector damp;               // exp(-v omega^2 / 2)
    std::vector<int> stencil;  // leftmost node of each 4-point read
    Matrix weights;            // n x 4 interpolation weights
  };
  std::vector<StepPlan> plan(m);
  for (int j = 0; j < m; ++j) {
    const double kap = spec.kappa[j];
    const double b = std::exp(-kap * dt);
    const double v =
        spec.sigma[j] * spec.sigma[j] * (1.0 - b * b) / (2.0 * kap);
    plan[j].damp.resize(n);
    for (int k = 0; k < n; ++k) {
      const int ks = k <= n / 2 ? k : k - n;
      const double omega = base_freq * ks;
      plan[j].damp[k] = std::exp(-0.5 * v * omega * omega);
    }
    plan[j].stencil.resize(n);
    plan[j].weights.resize(n, 4);
    for (int k = 0; k < n; ++k) {
      const double read = spec.theta[j] + (grid.x(k) - spec.theta[j]) * b;
      const double u = (read - grid.x_min) / dx;
      const int c0 =
          std::clamp(static_cast<int>(std::floor(u)) - 1, 0, n - 4);
      const double s = u - c0;
      plan[j].stencil[k] = c0;
      for (int r = 0; r < 4; ++r) {
        double w = 1.0;
        for (int q = 0; q < 4; ++q)
          if (q != r) w *= (s - q) / (r - q);
        plan[j].weights(k, r) = w;
      }
    }
  }

  std::vector<Vector> layer(m, Vector(n));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) layer[i][k] = std::exp(grid.x(k));
    for (int k = 0; k < n; ++k) surf.node(grid.n_t, k, i + 1) = layer[i][k];
  }

  CVector freq(n);
  std::vector<Vector> propagated(m, Vector(n));
  std::vector<Vector> next(m, Vector(n));
  for (int step = grid.n_t - 1; step >= 0; --step) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < n; ++k) freq[k] = Complex(layer[j][k], 0.0);
      fft_inplace(freq, false);
      for (int k = 0; k < n; ++k) freq[k] *= plan[j].damp[k];
      fft_inplace(freq, true);
      for (int k = 0; k < n; ++k) {
        const int c0 = plan[j].stencil[k];
        double acc = 0.0;
        for (int r = 0; r < 4; ++r)
          acc += plan[j].weights(k, r) * freq[c0 + r].real();
        propagated[j][k] = acc;
      }
    }
    for (int i = 0; i < m; ++i) {
      next[i].setZero();
      for (int j = 0; j < m; ++j) {
        const double pij = (i == j) ? 1.0 + qt(i, i) * dt : qt(i, j) * dt;
        if (pij != 0.0) next[i] += pij * propagated[j];
      }
      for (int k = 0; k < n; ++k) surf.node(step, k, i + 1) = next[i][k];
    }
    layer.swap(next);
  }

  surf.require_positive_interior("price_fst");
  return surf;
}

double xou_single_regime_price(double kappa, double theta, double sigma,
                               double maturity, double t, double x) {
  if (!(kappa > 0.0) || !(sigma > 0.0))
    throw ValidationError("xou_single_regime_price: need kappa, sigma > 0");
  if (t > maturity + 1e-12)
    throw TimeBeyondMaturity("xou_single_regime_price: t exceeds maturity");
  const double tau = std::max(maturity - t, 0.0);
  const double b = std::exp(-kappa * tau);
  return std::exp(b * x + theta * (1.0 - b) +
                  sigma * sigma * (1.0 - b * b) / (4.0 * kappa));
}

SeparableXouSurface::SeparableXouSurface(double kappa, double maturity,
                                         Matrix h_layers)
    : kappa_(kappa), maturity_(maturity), h_(std::move(h_layers)) {
  if (!(maturity_ > 0.0))
    throw ValidationError("SeparableXouSurface: maturity must be positive");
  if (h_.rows() < 2 || h_.cols() < 1)
    throw ValidationError("SeparableXouSurface: need >= 2 layers");
  if (!(h_.array() > 0.0).all())
    throw UnstableParameters("SeparableXouSurface: h must stay positive");
}

double SeparableXouSurface::h(double t, int regime) const {
  if (regime < 1 || regime > regimes())
    throw RegimeOutOfRange("SeparableXouSurface: regime out of range");
  if (t > maturity_ + 1e-12)
    throw TimeBeyondMaturity("SeparableXouSurface: t exceeds maturity");
  if (!(t >= -1e-12))
    throw ValidationError("SeparableXouSurface: t must be >= 0");
  const int n_t = static_cast<int>(h_.rows()) - 1;
  const double u = std::clamp(t, 0.0, maturity_) / maturity_ * n_t;
  const int layer = std::min(static_cast<int>(u), n_t - 1);
  const double frac = u - layer;
  return (1.0 - frac) * h_(layer, regime - 1) + frac * h_(layer + 1, regime - 1);
}

double SeparableXouSurface::price(double t, double x, int regime) const {
  const double tau = std::max(maturity_ - std::clamp(t, 0.0, maturity_), 0.0);
  const double b = std::exp(-kappa_ * tau);
  return std::exp(b * x) * h(t, regime);
}

double SeparableXouSurface::price_dx(double t, double x, int regime) const {
  const double tau = std::max(maturity_ - std::clamp(t, 0.0, maturity_), 0.0);
  const double b = std::exp(-kappa_ * tau);
  return b * price(t, x, regime);
}

SeparableXouSurface price_identical_kappa(const RegimeModelSpec& spec,
                                          double maturity, int n_t) {
  require_xou(spec, "price_identical_kappa");
  if (n_t < 1)
    throw ValidationError("price_identical_kappa: n_t must be >= 1");
  const int m = spec.regimes();
  const double kappa = spec.kappa[0];
  for (int i = 1; i < m; ++i)
    if (std::abs(spec.kappa[i] - kappa) > 1e-12 * std::abs(kappa))
      throw KappasDiffer(
          "price_identical_kappa: regimes have different kappas");

  const Matrix& qt = spec.measures.risk_neutral.rates;
  const double dt = maturity / n_t;

  auto rhs = [&](double t, const Vector& h) {
    const double b = std::exp(-kappa * (maturity - t));
    Vector out(m);
    for (int i = 0; i < m; ++i) {
      double v = -(kappa * spec.theta[i] * b +
                   0.5 * spec.sigma[i] * spec.sigma[i] * b * b) *
                 h[i];
      for (int j = 0; j < m; ++j)
        if (qt(i, j) != 0.0) v -= qt(i, j) * h[j];
      out[i] = v;
    }
    return out;
  };

  Matrix layers(n_t + 1, m);
  Vector h = Vector::Ones(m);
  layers.row(n_t) = h.transpose();
  for (int layer = n_t - 1; layer >= 0; --layer) {
    const double t1 = (layer + 1) * dt;
    const Vector k1 = rhs(t1, h);
    const Vector k2 = rhs(t1 - 0.5 * dt, h - 0.5 * dt * k1);
    const Vector k3 = rhs(t1 - 0.5 * dt, h - 0.5 * dt * k2);
    const Vector k4 = rhs(t1 - dt, h - dt * k3);
    h -= dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    layers.row(layer) = h.transpose();
  }
  return SeparableXouSurface(kappa, maturity, std::move(layers));
}

}  // namespace rsf
