#include "rsfutures/strategy.hpp"

#include <cmath>
#include <string>

#include "rsfutures/errors.hpp"

namespace rsf {

Vector TildeStrategy::stacked() const {
  const Index m = jump.size();
  Vector out(m);
  out[0] = brownian;
  Index r = 1;
  for (Index j = 0; j < m; ++j) {
    if (j == regime - 1) continue;
    out[r++] = jump[j];
  }
  return out;
}

TildeStrategy optimal_tilde(const RegimeModelSpec& spec, const Vector& phi_at_t,
                            int regime, double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("optimal_tilde: gamma must be > 0");
  const Index i = regime_index(spec, regime);
  const Index m = spec.regimes();
  if (phi_at_t.size() != m)
    throw ValidationError("optimal_tilde: phi vector length mismatch");
  const Matrix& q = spec.measures.physical.rates;
  const Matrix& qt = spec.measures.risk_neutral.rates;

  TildeStrategy ts;
  ts.regime = regime;
  ts.brownian = spec.zeta[i] / gamma;
  ts.jump = Vector::Zero(m);
  for (Index j = 0; j < m; ++j) {
    if (j == i) continue;
    const double pij = q(i, j);
    const double rij = qt(i, j);
    if (pij == 0.0 && rij == 0.0) continue;
    if (pij == 0.0 || rij == 0.0)
      throw MeasureInequivalence("optimal_tilde: one-sided zero intensity");
    ts.jump[j] =
        -(std::log(rij / pij) + phi_at_t[i] - phi_at_t[j]) / gamma;
  }
  return ts;
}

TildeStrategy optimal_tilde(const RegimeModelSpec& spec, const PhiSolution& phi,
                            double t, int regime, double gamma) {
  if (spec.regimes() == 1) {
    // No reachable switches; phi never enters.
    TildeStrategy ts;
    ts.regime = regime_index(spec, regime) + 1;
    if (!(gamma > 0.0))
      throw ValidationError("optimal_tilde: gamma must be > 0");
    ts.brownian = spec.zeta[0] / gamma;
    ts.jump = Vector::Zero(1);
    return ts;
  }
  return optimal_tilde(spec, phi.at(t), regime, gamma);
}

Matrix build_gamma(const std::vector<const PriceSurface*>& surfaces,
                   const RegimeModelSpec& spec, double t, double x,
                   int regime) {
  const Index i = regime_index(spec, regime);
  const Index m = spec.regimes();
  if (static_cast<Index>(surfaces.size()) != m)
    throw ValidationError("build_gamma: need one surface per regime");
  Matrix gam(m, m);
  for (Index k = 0; k < m; ++k) {
    const PriceSurface& s = *surfaces[k];
    gam(0, k) = spec.sigma[i] * s.price_dx(t, x, regime);
    const double own = s.price(t, x, regime);
    Index r = 1;
    for (Index j = 0; j < m; ++j) {
      if (j == i) continue;
      gam(r, k) = s.price(t, x, static_cast<int>(j) + 1) - own;
      ++r;
    }
  }
  return gam;
}

PositionSolve recover_positions(const Matrix& gamma, const Vector& tilde) {
  if (gamma.rows() != gamma.cols() || gamma.rows() != tilde.size())
    throw ValidationError("recover_positions: shape mismatch");
  if (gamma.rows() == 1) {
    const double det = gamma(0, 0);
    if (det == 0.0)
      throw SingularGamma("recover_positions: sensitivity matrix is singular");
    Vector pos(1);
    pos[0] = tilde[0] / det;
    return PositionSolve{std::move(pos), det};
  }
  Eigen::PartialPivLU<Matrix> lu(gamma);
  const double det = lu.determinant();
  double rows = 1.0;
  for (Index r = 0; r < gamma.rows(); ++r) rows *= gamma.row(r).norm();
  if (std::abs(det) <= 1e-12 * rows)
    throw SingularGamma("recover_positions: sensitivity matrix is singular");
  return PositionSolve{lu.solve(tilde), det};
}

namespace {

double log_rate_gap(const RegimeModelSpec& spec, const Vector& phi, Index i,
                    Index j) {
  const double pij = spec.measures.physical.rates(i, j);
  const double rij = spec.measures.risk_neutral.rates(i, j);
  if (pij == 0.0 || rij == 0.0)
    throw MeasureInequivalence("two-regime strategy: vanishing intensity");
  return std::log(rij / pij) + phi[i] - phi[j];
}

}  // namespace

Vector strategy_two_regime_gbm(const GbmPricerSet& set, const PhiSolution& phi,
                               double t, double x, int regime, double gamma) {
  const RegimeModelSpec& spec = set.spec();
  if (spec.regimes() != 2)
    throw ValidationError("strategy_two_regime_gbm: needs exactly 2 regimes");
  if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
  const Index i = regime_index(spec, regime);
  const Index j = 1 - i;
  const Vector phv = phi.at(t);
  const double gap = log_rate_gap(spec, phv, i, j);
  const double zi = spec.zeta[i];
  const double si = spec.sigma[i];
  const Vector g1 = set.pricer(1).g_vector(t);
  const Vector g2 = set.pricer(2).g_vector(t);
  const double ex = std::exp(x);
  const double det = si * ex * ex * (g1[i] * g2[j] - g2[i] * g1[j]);
  const double rows = si * ex * std::hypot(g1[i], g2[i]) * ex *
                      std::hypot(g1[j] - g1[i], g2[j] - g2[i]);
  if (std::abs(det) <= 1e-12 * rows)
    throw SingularGamma("strategy_two_regime_gbm: singular sensitivities");
  Vector pi(2);
  pi[0] = (zi / gamma * ex * (g2[j] - g2[i]) + gap / gamma * si * ex * g2[i]) /
          det;
  pi[1] = -(zi / gamma * ex * (g1[j] - g1[i]) + gap / gamma * si * ex * g1[i]) /
          det;
  return pi;
}

Vector strategy_two_regime_xou(const RegimeModelSpec& spec,
                               const PriceSurface& first,
                               const PriceSurface& second,
                               const PhiSolution& phi, double t, double x,
                               int regime, double gamma) {
  if (spec.regimes() != 2)
    throw ValidationError("strategy_two_regime_xou: needs exactly 2 regimes");
  if (!(gamma > 0.0)) throw ValidationError("gamma must be > 0");
  const Index i = regime_index(spec, regime);
  const Index j = 1 - i;
  const Vector phv = phi.at(t);
  const double gap = log_rate_gap(spec, phv, i, j);
  const double zi = spec.zeta[i];
  const double si = spec.sigma[i];
  const int ri = static_cast<int>(i) + 1;
  const int rj = static_cast<int>(j) + 1;
  const double d1 = first.price_dx(t, x, ri);
  const double d2 = second.price_dx(t, x, ri);
  const double j1 = first.price(t, x, rj) - first.price(t, x, ri);
  const double j2 = second.price(t, x, rj) - second.price(t, x, ri);
  const double det = si * (d1 * j2 - d2 * j1);
  const double rows = si * std::hypot(d1, d2) * std::hypot(j1, j2);
  if (std::abs(det) <= 1e-12 * rows)
    throw SingularGamma("strategy_two_regime_xou: singular sensitivities");
  Vector pi(2);
  pi[0] = (zi / gamma * j2 + gap / gamma * si * d2) / det;
  pi[1] = -(zi / gamma * j1 + gap / gamma * si * d1) / det;
  return pi;
}

}  // namespace rsf
