#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsfutures/market_models.hpp"
#include "rsfutures/regime_chain.hpp"
#include "rsfutures/simulate.hpp"
#include "rsfutures/types.hpp"

namespace rsf {

// One run description: model and measures, the futures portfolio, numerics
// knobs, and the simulation block. Parsing materializes every default, so
// serializing and re-parsing reproduces the same configuration.
struct RunConfig {
  RegimeModelSpec spec;
  Vector maturities;  // T1 < T2 < ..., one per regime

  double gamma = 1.0;
  double w0 = 0.0;
  double horizon = 0.0;  // Ttilde <= T1

  // numerics
  int n_x = 1024;
  int n_t = 400;
  double x_min = 0.0;  // xou only, resolved from the stationary band when absent
  double x_max = 0.0;
  std::vector<std::string> methods;  // xou surface builders, first drives runs
  double x_ref = 0.0;
  int curve_points = 101;
  int h_steps = 1000;
  std::vector<double> ce_gammas;
  double ce_horizon = 0.0;
  int dump_stride_x = 1;
  int dump_stride_t = 1;

  SimConfig sim;
  std::optional<RegimePath> forced;
  std::vector<std::pair<double, int>> forced_switches;  // as configured
  std::string out_dir = "out";
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

nlohmann::json config_to_json(const RunConfig& cfg);

// Compact dump with sorted keys; input to the manifest hash.
std::string canonical_config_dump(const RunConfig& cfg);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace rsf
