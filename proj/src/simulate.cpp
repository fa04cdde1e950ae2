#include "rsfutures/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "rsfutures/errors.hpp"
#include "rsfutures/strategy.hpp"

namespace rsf {

TimeGrid simulation_grid(double horizon, double dt, const RegimePath& path) {
  if (!(horizon > 0.0)) throw ValidationError("simulation_grid: horizon <= 0");
  if (!(dt > 0.0)) throw ValidationError("simulation_grid: dt <= 0");
  const int steps = std::max(1, static_cast<int>(std::lround(horizon / dt)));
  std::vector<double> times(steps + 1);
  for (int n = 0; n <= steps; ++n)
    times[n] = horizon * static_cast<double>(n) / steps;

  const double tol = 1e-12 * std::max(1.0, horizon);
  for (const auto& j : path.jumps) {
    if (j.time > horizon) break;
    auto it = std::lower_bound(times.begin(), times.end(), j.time);
    const bool near_next = it != times.end() && *it - j.time <= tol;
    const bool near_prev = it != times.begin() && j.time - *(it - 1) <= tol;
    if (!near_next && !near_prev) times.insert(it, j.time);
  }

  TimeGrid grid;
  grid.t = std::move(times);
  grid.regime.resize(grid.t.size());
  for (std::size_t n = 0; n < grid.t.size(); ++n)
    grid.regime[n] = path.state_at(std::min(grid.t[n], path.t1));
  return grid;
}

Vector simulate_log_spot(const RegimeModelSpec& spec, const TimeGrid& grid,
                         double x0, Rng& rng) {
  const std::size_t n = grid.t.size();
  Vector x(n);
  x[0] = x0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Index i = regime_index(spec, grid.regime[k]);
    const double delta = grid.t[k + 1] - grid.t[k];
    const double z = rng.normal();
    if (spec.kind == ModelKind::Gbm) {
      const double drift = spec.mu[i] + spec.zeta[i] * spec.sigma[i];
      x[k + 1] = x[k] + drift * delta + spec.sigma[i] * std::sqrt(delta) * z;
    } else {
      const double level =
          spec.theta[i] + spec.zeta[i] * spec.sigma[i] / spec.kappa[i];
      const double e = std::exp(-spec.kappa[i] * delta);
      const double sd =
          spec.sigma[i] * std::sqrt((1.0 - e * e) / (2.0 * spec.kappa[i]));
      x[k + 1] = level + (x[k] - level) * e + sd * z;
    }
  }
  return x;
}

Matrix mark_to_market(const std::vector<const PriceSurface*>& surfaces,
                      const TimeGrid& grid, const Vector& log_spot) {
  const Index n = static_cast<Index>(grid.t.size());
  const Index kk = static_cast<Index>(surfaces.size());
  Matrix f(n, kk);
  for (Index row = 0; row < n; ++row)
    for (Index k = 0; k < kk; ++k)
      f(row, k) =
          surfaces[k]->price(grid.t[row], log_spot[row], grid.regime[row]);
  return f;
}

PathBundle run_path(const RegimeModelSpec& spec,
                    const std::vector<const PriceSurface*>& surfaces,
                    const PhiSolution& phi, const SimConfig& cfg,
                    const RegimePath& path, Rng& rng) {
  const int m = spec.regimes();
  if (static_cast<int>(surfaces.size()) != m)
    throw ValidationError("run_path: need one surface per regime");
  if (cfg.horizon > phi.horizon() + 1e-12)
    throw ValidationError("run_path: horizon exceeds the phi horizon");
  for (const auto* s : surfaces)
    if (cfg.horizon > s->maturity() + 1e-12)
      throw TimeBeyondMaturity("run_path: horizon exceeds a maturity");

  PathBundle b;
  b.grid = simulation_grid(cfg.horizon, cfg.dt, path);
  b.log_spot = simulate_log_spot(spec, b.grid, cfg.x0, rng);
  b.futures = mark_to_market(surfaces, b.grid, b.log_spot);

  const Index n = static_cast<Index>(b.grid.t.size());
  b.positions.resize(n, m);
  b.abs_det_gamma.resize(n);
  b.wealth.resize(n);
  for (Index row = 0; row < n; ++row) {
    const double t = b.grid.t[row];
    const int state = b.grid.regime[row];
    const Matrix gam = build_gamma(surfaces, spec, t, b.log_spot[row], state);
    const TildeStrategy tilde = optimal_tilde(spec, phi, t, state, cfg.gamma);
    const PositionSolve sol = recover_positions(gam, tilde.stacked());
    b.positions.row(row) = sol.positions.transpose();
    b.abs_det_gamma[row] = std::abs(sol.det);
  }
  b.wealth[0] = cfg.w0;
  for (Index row = 0; row + 1 < n; ++row) {
    const double gain =
        b.positions.row(row).dot(b.futures.row(row + 1) - b.futures.row(row));
    b.wealth[row + 1] = b.wealth[row] + gain;
  }
  return b;
}

std::vector<PathBundle> run_experiment(
    const RegimeModelSpec& spec,
    const std::vector<const PriceSurface*>& surfaces, const PhiSolution& phi,
    const SimConfig& cfg, const std::optional<RegimePath>& forced) {
  if (cfg.paths < 1) throw ValidationError("run_experiment: paths < 1");
  if (cfg.threads < 1) throw ValidationError("run_experiment: threads < 1");
  regime_index(spec, cfg.initial_regime);

  std::vector<PathBundle> out(cfg.paths);
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](int first, int stride) {
    try {
      for (int idx = first; idx < cfg.paths; idx += stride) {
        Rng rng(derive_path_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
        RegimePath path =
            forced ? *forced
                   : sample_path(spec.measures.physical, 0.0, cfg.horizon,
                                 cfg.initial_regime, rng);
        out[idx] = run_path(spec, surfaces, phi, cfg, path, rng);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const int workers = std::min(cfg.threads, cfg.paths);
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Vector euler_optimal_wealth(const RegimeModelSpec& spec, const PhiSolution& phi,
                            double gamma, const TimeGrid& grid,
                            const Vector& log_spot, double w0) {
  if (!(gamma > 0.0)) throw ValidationError("euler_optimal_wealth: gamma <= 0");
  const int m = spec.regimes();
  const Matrix& q = spec.measures.physical.rates;
  const Matrix& qt = spec.measures.risk_neutral.rates;
  const Index n = static_cast<Index>(grid.t.size());
  Vector w(n);
  w[0] = w0;
  for (Index k = 0; k + 1 < n; ++k) {
    const Index i = regime_index(spec, grid.regime[k]);
    const double delta = grid.t[k + 1] - grid.t[k];
    const double dz =
        (log_spot[k + 1] - log_spot[k] -
         drift_p(spec, log_spot[k], grid.regime[k]) * delta) /
        spec.sigma[i];
    double drift = spec.zeta[i] * spec.zeta[i];
    if (m > 1) {
      const Vector phv = phi.at(grid.t[k]);
      for (Index j = 0; j < m; ++j) {
        if (j == i || qt(i, j) == 0.0) continue;
        drift += qt(i, j) *
                 (std::log(qt(i, j) / q(i, j)) + phv[i] - phv[j]);
      }
    }
    double dw = drift * delta / gamma + spec.zeta[i] / gamma * dz;
    const Index next = regime_index(spec, grid.regime[k + 1]);
    if (next != i) {
      const Vector phv = phi.at(grid.t[k + 1]);
      dw -= (std::log(qt(i, next) / q(i, next)) + phv[i] - phv[next]) / gamma;
    }
    w[k + 1] = w[k] + dw;
  }
  return w;
}

}  // namespace rsf
