#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rsfutures/hjb.hpp"
#include "rsfutures/market_models.hpp"
#include "rsfutures/regime_chain.hpp"
#include "rsfutures/rng.hpp"
#include "rsfutures/surface.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

struct SimConfig {
  double horizon = 0.0;
  double dt = 0.0;  // uniform step; regime switch times are inserted
  int paths = 1;
  std::uint64_t seed = 0;
  double x0 = 0.0;
  int initial_regime = 1;
  double w0 = 0.0;
  double gamma = 1.0;
  int threads = 1;
};

// Uniform grid on [0, horizon] with every switch time of the regime path
// inserted, so no step straddles a switch. `regime[n]` is the state holding
// on [t[n], t[n+1]).
struct TimeGrid {
  std::vector<double> t;
  std::vector<int> regime;
};

TimeGrid simulation_grid(double horizon, double dt, const RegimePath& path);

// Exact transitions per single-regime segment under the physical measure:
// arithmetic Brownian steps for Gbm, the OU transition law (with the
// risk-premium-shifted level) for Xou. One normal draw per step.
Vector simulate_log_spot(const RegimeModelSpec& spec, const TimeGrid& grid,
                         double x0, Rng& rng);

Matrix mark_to_market(const std::vector<const PriceSurface*>& surfaces,
                      const TimeGrid& grid, const Vector& log_spot);

struct PathBundle {
  TimeGrid grid;
  Vector log_spot;
  Matrix futures;        // node x contract
  Matrix positions;      // node x contract, held from the node onward
  Vector wealth;         // marked at nodes, w0 at node 0
  Vector abs_det_gamma;  // |det| of the sensitivity matrix at each node
};

PathBundle run_path(const RegimeModelSpec& spec,
                    const std::vector<const PriceSurface*>& surfaces,
                    const PhiSolution& phi, const SimConfig& cfg,
                    const RegimePath& path, Rng& rng);

// Seeds are derived per path index, so results are independent of the number
// of worker threads. A forced path fixes the regime trajectory of every path.
std::vector<PathBundle> run_experiment(
    const RegimeModelSpec& spec,
    const std::vector<const PriceSurface*>& surfaces, const PhiSolution& phi,
    const SimConfig& cfg, const std::optional<RegimePath>& forced = {});

// Wealth of the optimal investor stepped directly through its SDE: drift and
// Brownian exposure between switches, a log-intensity-gap kick at switches.
// The Brownian increments are recovered from the simulated log spot.
Vector euler_optimal_wealth(const RegimeModelSpec& spec, const PhiSolution& phi,
                            double gamma, const TimeGrid& grid,
                            const Vector& log_spot, double w0);

}  // namespace rsf
