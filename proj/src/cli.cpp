#include "rsfutures/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rsfutures/csv.hpp"
#include "rsfutures/errors.hpp"
#include "rsfutures/hjb.hpp"
#include "rsfutures/pricing_gbm.hpp"
#include "rsfutures/pricing_xou.hpp"
#include "rsfutures/simulate.hpp"
#include "rsfutures/strategy.hpp"

namespace rsf {

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// Collects output file names, then closes the run with config_used.json and
// manifest.json. The manifest carries the hash of the effective config, so a
// run is reproducible from its own output directory.
class RunOutput {
 public:
  RunOutput(const RunConfig& cfg, std::string command)
      : cfg_(cfg),
        command_(std::move(command)),
        start_(std::chrono::steady_clock::now()) {
    std::filesystem::create_directories(cfg.out_dir);
  }

  std::string file(const std::string& name) {
    names_.push_back(name);
    return cfg_.out_dir + "/" + name;
  }

  void finish() {
    {
      std::ofstream out(file("config_used.json"), std::ios::binary);
      if (!out) throw Error("cannot write config_used.json");
      out << config_to_json(cfg_).dump(2) << '\n';
    }
    ManifestInfo info;
    info.command = command_;
    info.config_hash = hash_hex(fnv1a64(canonical_config_dump(cfg_)));
    info.seed = cfg_.sim.seed;
    info.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start_)
                       .count();
    info.files = names_;
    write_manifest(cfg_.out_dir, info);
  }

 private:
  const RunConfig& cfg_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> names_;
};

// One owner for whichever pricing backend the config selects; `views` always
// holds one surface per contract, in maturity order.
struct SurfaceSet {
  std::unique_ptr<GbmPricerSet> gbm;
  std::vector<std::unique_ptr<PriceSurface>> owned;
  std::vector<const PriceSurface*> views;
};

SurfaceSet build_surfaces(const RunConfig& cfg, const std::string& method) {
  SurfaceSet set;
  if (cfg.spec.kind == ModelKind::Gbm) {
    set.gbm = std::make_unique<GbmPricerSet>(cfg.spec, cfg.maturities);
    set.views = set.gbm->surfaces();
    return set;
  }
  const SpaceTimeGrid grid =
      SpaceTimeGrid::validated(cfg.x_min, cfg.x_max, cfg.n_x, cfg.n_t);
  for (int k = 0; k < cfg.spec.regimes(); ++k) {
    const double maturity = cfg.maturities[k];
    if (method == "fdm") {
      set.owned.push_back(
          std::make_unique<GridSurface>(price_fdm(cfg.spec, maturity, grid)));
    } else if (method == "fst") {
      set.owned.push_back(
          std::make_unique<GridSurface>(price_fst(cfg.spec, maturity, grid)));
    } else if (method == "separable") {
      set.owned.push_back(std::make_unique<SeparableXouSurface>(
          price_identical_kappa(cfg.spec, maturity, cfg.h_steps)));
    } else {
      throw ConfigInvalid("unknown pricing method '" + method + "'");
    }
  }
  for (const auto& s : set.owned) set.views.push_back(s.get());
  return set;
}

std::string primary_method(const RunConfig& cfg) {
  return cfg.methods.empty() ? std::string("fdm") : cfg.methods.front();
}

// Indices 0, stride, 2*stride, ... with the final index always included.
std::vector<int> strided(int count, int stride) {
  std::vector<int> idx;
  for (int v = 0; v < count; v += stride) idx.push_back(v);
  if (idx.back() != count - 1) idx.push_back(count - 1);
  return idx;
}

void dump_xou_surface(CsvFile& csv, const PriceSurface& surface,
                      const SpaceTimeGrid& grid, const RunConfig& cfg) {
  const double maturity = surface.maturity();
  const auto layers = strided(cfg.n_t + 1, cfg.dump_stride_t);
  const auto nodes = strided(cfg.n_x, cfg.dump_stride_x);
  for (int l : layers) {
    const double t = maturity * l / cfg.n_t;
    for (int m0 : nodes) {
      const double x = grid.x(m0);
      for (int i = 1; i <= surface.regimes(); ++i) {
        csv.field(t)
            .field(x)
            .field(i)
            .field(surface.price(t, x, i))
            .field(surface.price_dx(t, x, i));
        csv.endrow();
      }
    }
  }
}

std::vector<std::string> path_columns(int m) {
  std::vector<std::string> cols = {"t", "regime", "spot"};
  for (int k = 1; k <= m; ++k) cols.push_back("F_" + std::to_string(k));
  for (int k = 1; k <= m; ++k) cols.push_back("pi_" + std::to_string(k));
  cols.push_back("wealth");
  cols.push_back("abs_det_gamma");
  return cols;
}

void write_path_rows(CsvFile& csv, const PathBundle& b, int path_index) {
  const Index n = static_cast<Index>(b.grid.t.size());
  const Index m = b.futures.cols();
  for (Index row = 0; row < n; ++row) {
    if (path_index >= 0) csv.field(path_index);
    csv.field(b.grid.t[row])
        .field(b.grid.regime[row])
        .field(std::exp(b.log_spot[row]));
    for (Index k = 0; k < m; ++k) csv.field(b.futures(row, k));
    for (Index k = 0; k < m; ++k) csv.field(b.positions(row, k));
    csv.field(b.wealth[row]).field(b.abs_det_gamma[row]);
    csv.endrow();
  }
}

}  // namespace

void cmd_price(const RunConfig& cfg) {
  RunOutput out(cfg, "price");
  const int m = cfg.spec.regimes();

  if (cfg.spec.kind == ModelKind::Gbm) {
    GbmPricerSet set(cfg.spec, cfg.maturities);
    for (int k = 1; k <= set.contracts(); ++k) {
      const GbmPricer& pricer = set.pricer(k);
      CsvFile csv(out.file("gbm_curve_T" + std::to_string(k) + ".csv"),
                  {"t", "regime", "g", "F_at_xref"});
      for (int n = 0; n < cfg.curve_points; ++n) {
        const double t = pricer.maturity() * n / (cfg.curve_points - 1);
        const Vector g = pricer.g_vector(t);
        for (int i = 1; i <= m; ++i) {
          csv.field(t)
              .field(i)
              .field(g[i - 1])
              .field(std::exp(cfg.x_ref) * g[i - 1]);
          csv.endrow();
        }
      }
    }
    out.finish();
    return;
  }

  const SpaceTimeGrid grid =
      SpaceTimeGrid::validated(cfg.x_min, cfg.x_max, cfg.n_x, cfg.n_t);
  std::vector<SurfaceSet> sets;
  sets.reserve(cfg.methods.size());
  for (const std::string& method : cfg.methods) {
    sets.push_back(build_surfaces(cfg, method));
    for (int k = 1; k <= m; ++k) {
      CsvFile csv(
          out.file("xou_" + method + "_T" + std::to_string(k) + ".csv"),
          {"t", "x", "regime", "F", "dF_dx"});
      dump_xou_surface(csv, *sets.back().views[k - 1], grid, cfg);
    }
  }

  if (cfg.methods.size() >= 2) {
    const double span = cfg.x_max - cfg.x_min;
    const double lo = cfg.x_min + 0.25 * span;
    const double hi = cfg.x_max - 0.25 * span;
    CsvFile csv(out.file("method_differences.csv"),
                {"contract", "method_a", "method_b", "max_rel_diff"});
    for (std::size_t a = 0; a < sets.size(); ++a) {
      for (std::size_t b = a + 1; b < sets.size(); ++b) {
        for (int k = 0; k < m; ++k) {
          const PriceSurface& fa = *sets[a].views[k];
          const PriceSurface& fb = *sets[b].views[k];
          double worst = 0.0;
          for (int l = 0; l <= cfg.n_t; ++l) {
            const double t = cfg.maturities[k] * l / cfg.n_t;
            for (int m0 : strided(cfg.n_x, cfg.dump_stride_x)) {
              const double x = grid.x(m0);
              if (x < lo || x > hi) continue;
              for (int i = 1; i <= m; ++i) {
                const double va = fa.price(t, x, i);
                const double vb = fb.price(t, x, i);
                const double scale = std::max(std::abs(va), std::abs(vb));
                if (scale > 0.0)
                  worst = std::max(worst, std::abs(va - vb) / scale);
              }
            }
          }
          csv.field(k + 1)
              .field(cfg.methods[a])
              .field(cfg.methods[b])
              .field(worst);
          csv.endrow();
        }
      }
    }
  }
  out.finish();
}

void cmd_ce(const RunConfig& cfg) {
  RunOutput out(cfg, "ce");
  const PhiSolution phi = solve_phi(cfg.spec, cfg.ce_horizon);
  CsvFile csv(out.file("ce.csv"), {"horizon", "regime", "gamma", "ce"});
  for (int n = 0; n < cfg.curve_points; ++n) {
    const double u = cfg.ce_horizon * n / (cfg.curve_points - 1);
    for (int i = 1; i <= cfg.spec.regimes(); ++i) {
      for (double g : cfg.ce_gammas) {
        csv.field(u).field(i).field(g).field(
            certainty_equivalent(phi, cfg.ce_horizon - u, i, g, cfg.w0));
        csv.endrow();
      }
    }
  }
  out.finish();
}

void cmd_phi(const RunConfig& cfg) {
  RunOutput out(cfg, "phi");
  const PhiSolution phi = solve_phi(cfg.spec, cfg.horizon);
  CsvFile csv(out.file("phi.csv"), {"t", "regime", "phi"});
  for (int n = 0; n < cfg.curve_points; ++n) {
    const double t = cfg.horizon * n / (cfg.curve_points - 1);
    const Vector v = phi.at(t);
    for (int i = 1; i <= cfg.spec.regimes(); ++i) {
      csv.field(t).field(i).field(v[i - 1]);
      csv.endrow();
    }
  }
  out.finish();
}

void cmd_strategy(const RunConfig& cfg) {
  RunOutput out(cfg, "strategy");
  const int m = cfg.spec.regimes();
  const PhiSolution phi = solve_phi(cfg.spec, cfg.horizon);
  const SurfaceSet set = build_surfaces(cfg, primary_method(cfg));

  std::vector<std::string> cols = {"t", "regime", "x"};
  for (int k = 1; k <= m; ++k) cols.push_back("pi_" + std::to_string(k));
  cols.push_back("det_gamma");
  CsvFile csv(out.file("strategy.csv"), cols);

  for (int n = 0; n < cfg.curve_points; ++n) {
    const double t = cfg.horizon * n / (cfg.curve_points - 1);
    for (int i = 1; i <= m; ++i) {
      const Matrix gam = build_gamma(set.views, cfg.spec, t, cfg.x_ref, i);
      const TildeStrategy tilde = optimal_tilde(cfg.spec, phi, t, i, cfg.gamma);
      const PositionSolve sol = recover_positions(gam, tilde.stacked());
      csv.field(t).field(i).field(cfg.x_ref);
      for (int k = 0; k < m; ++k) csv.field(sol.positions[k]);
      csv.field(sol.det);
      csv.endrow();
    }
  }
  out.finish();
}

void cmd_simulate(const RunConfig& cfg, bool batch) {
  RunOutput out(cfg, "simulate");
  const int m = cfg.spec.regimes();
  const PhiSolution phi = solve_phi(cfg.spec, cfg.horizon);
  const SurfaceSet set = build_surfaces(cfg, primary_method(cfg));
  const std::vector<PathBundle> bundles =
      run_experiment(cfg.spec, set.views, phi, cfg.sim, cfg.forced);

  const std::vector<std::string> cols = path_columns(m);
  if (batch) {
    std::vector<std::string> batch_cols = {"path"};
    batch_cols.insert(batch_cols.end(), cols.begin(), cols.end());
    CsvFile csv(out.file("paths.csv"), batch_cols);
    for (std::size_t p = 0; p < bundles.size(); ++p)
      write_path_rows(csv, bundles[p], static_cast<int>(p));
  } else {
    for (std::size_t p = 0; p < bundles.size(); ++p) {
      char name[32];
      std::snprintf(name, sizeof(name), "path_%04d.csv", static_cast<int>(p));
      CsvFile csv(out.file(name), cols);
      write_path_rows(csv, bundles[p], -1);
    }
  }

  double mean = 0.0;
  for (const PathBundle& b : bundles) mean += b.wealth[b.wealth.size() - 1];
  mean /= static_cast<double>(bundles.size());
  double var = 0.0;
  for (const PathBundle& b : bundles) {
    const double d = b.wealth[b.wealth.size() - 1] - mean;
    var += d * d;
  }
  const double sd =
      bundles.size() > 1 ? std::sqrt(var / (bundles.size() - 1.0)) : 0.0;
  CsvFile summary(out.file("summary.csv"),
                  {"paths", "terminal_wealth_mean", "terminal_wealth_sd"});
  summary.field(static_cast<long long>(bundles.size())).field(mean).field(sd);
  summary.endrow();
  out.finish();
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_override,
                std::optional<std::uint64_t> seed_override, bool batch) {
  try {
    RunConfig cfg = parse_config_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (seed_override) cfg.sim.seed = *seed_override;
    if (command == "price") {
      cmd_price(cfg);
    } else if (command == "ce") {
      cmd_ce(cfg);
    } else if (command == "phi") {
      cmd_phi(cfg);
    } else if (command == "strategy") {
      cmd_strategy(cfg);
    } else if (command == "simulate") {
      cmd_simulate(cfg, batch);
    } else {
      throw ConfigInvalid("unknown command '" + command + "'");
    }
    return 0;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rsf
