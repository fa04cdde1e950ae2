#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rsfutures/config.hpp"

namespace rsf {

// Each command reads cfg, writes its CSV outputs plus config_used.json and
// manifest.json into cfg.out_dir. All of them are deterministic given the
// seed stored in the config.
void cmd_price(const RunConfig& cfg);
void cmd_ce(const RunConfig& cfg);
void cmd_phi(const RunConfig& cfg);
void cmd_strategy(const RunConfig& cfg);

// `batch` collects every path into one long-format file instead of one file
// per path.
void cmd_simulate(const RunConfig& cfg, bool batch);

// Parse, apply overrides, dispatch, and translate exceptions into process
// exit codes: 0 success, 2 bad config or inputs, 3 numerical failure,
// 1 anything else. Messages go to stderr.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_override,
                std::optional<std::uint64_t> seed_override, bool batch);

}  // namespace rsf
