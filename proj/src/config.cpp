#include "rsfutures/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "rsfutures/errors.hpp"
#include "rsfutures/pricing_xou.hpp"

namespace rsf {

namespace {

using nlohmann::json;

const json& section(const json& root, const char* name) {
  if (!root.contains(name))
    throw ConfigInvalid(std::string("config: missing section '") + name + "'");
  const json& s = root.at(name);
  if (!s.is_object())
    throw ConfigInvalid(std::string("config: section '") + name +
                        "' must be an object");
  return s;
}

void reject_unknown(const json& sec, const char* name,
                    const std::set<std::string>& allowed) {
  for (const auto& item : sec.items())
    if (!allowed.count(item.key()))
      throw ConfigInvalid(std::string("config: unknown key '") + name + "." +
                          item.key() + "'");
}

double require_num(const json& sec, const char* name, const std::string& key) {
  if (!sec.contains(key))
    throw ConfigInvalid(std::string("config: missing '") + name + "." + key +
                        "'");
  const json& v = sec.at(key);
  if (!v.is_number())
    throw ConfigInvalid(std::string("config: '") + name + "." + key +
                        "' must be a number");
  return v.get<double>();
}

double num_or(const json& sec, const char* name, const std::string& key,
              double fallback) {
  if (!sec.contains(key)) return fallback;
  const json& v = sec.at(key);
  if (!v.is_number())
    throw ConfigInvalid(std::string("config: '") + name + "." + key +
                        "' must be a number");
  return v.get<double>();
}

int int_or(const json& sec, const char* name, const std::string& key,
           int fallback) {
  if (!sec.contains(key)) return fallback;
  const json& v = sec.at(key);
  if (!v.is_number_integer())
    throw ConfigInvalid(std::string("config: '") + name + "." + key +
                        "' must be an integer");
  return v.get<int>();
}

Vector per_regime(const json& sec, const char* name, const std::string& prefix,
                  int m) {
  Vector out(m);
  for (int i = 1; i <= m; ++i) {
    const std::string key = prefix + "_" + std::to_string(i);
    out[i - 1] = require_num(sec, name, key);
  }
  return out;
}

Matrix rate_matrix(const json& sec, const char* name, const std::string& key) {
  if (!sec.contains(key))
    throw ConfigInvalid(std::string("config: missing '") + name + "." + key +
                        "'");
  const json& rows = sec.at(key);
  if (!rows.is_array() || rows.empty())
    throw ConfigInvalid(std::string("config: '") + name + "." + key +
                        "' must be a non-empty array of rows");
  const std::size_t m = rows.size();
  Matrix out(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || row.size() != m)
      throw ConfigInvalid(std::string("config: '") + name + "." + key +
                          "' must be square, row-major");
    for (std::size_t j = 0; j < m; ++j) {
      if (!row.at(j).is_number())
        throw ConfigInvalid(std::string("config: '") + name + "." + key +
                            "' entries must be numbers");
      out(i, j) = row.at(j).get<double>();
    }
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigInvalid("config: top level must be an object");
  for (const auto& item : root.items()) {
    static const std::set<std::string> sections = {
        "model", "measures", "portfolio", "numerics", "simulation"};
    if (!sections.count(item.key()))
      throw ConfigInvalid("config: unknown section '" + item.key() + "'");
  }

  const json& measures = section(root, "measures");
  reject_unknown(measures, "measures", {"q", "qt"});
  const Matrix q = rate_matrix(measures, "measures", "q");
  const Matrix qt = rate_matrix(measures, "measures", "qt");
  if (q.rows() != qt.rows())
    throw ConfigInvalid("config: q and qt must have the same size");
  const int m = static_cast<int>(q.rows());

  MeasurePair pair = [&] {
    try {
      return make_measure_pair(q, qt);
    } catch (const Error& e) {
      throw ConfigInvalid(std::string("config: measures: ") + e.what());
    }
  }();

  const json& model = section(root, "model");
  if (!model.contains("kind") || !model.at("kind").is_string())
    throw ConfigInvalid("config: 'model.kind' must be \"gbm\" or \"xou\"");
  const std::string kind = model.at("kind").get<std::string>();

  RunConfig cfg;
  try {
    if (kind == "gbm") {
      std::set<std::string> allowed = {"kind"};
      for (int i = 1; i <= m; ++i) {
        allowed.insert("mu_" + std::to_string(i));
        allowed.insert("sigma_" + std::to_string(i));
        allowed.insert("zeta_" + std::to_string(i));
      }
      reject_unknown(model, "model", allowed);
      cfg.spec = make_gbm_spec(per_regime(model, "model", "mu", m),
                               per_regime(model, "model", "sigma", m),
                               per_regime(model, "model", "zeta", m), pair);
    } else if (kind == "xou") {
      std::set<std::string> allowed = {"kind"};
      for (int i = 1; i <= m; ++i) {
        allowed.insert("kappa_" + std::to_string(i));
        allowed.insert("theta_" + std::to_string(i));
        allowed.insert("sigma_" + std::to_string(i));
        allowed.insert("zeta_" + std::to_string(i));
      }
      reject_unknown(model, "model", allowed);
      cfg.spec = make_xou_spec(per_regime(model, "model", "kappa", m),
                               per_regime(model, "model", "theta", m),
                               per_regime(model, "model", "sigma", m),
                               per_regime(model, "model", "zeta", m), pair);
    } else {
      throw ConfigInvalid("config: 'model.kind' must be \"gbm\" or \"xou\"");
    }
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const Error& e) {
    throw ConfigInvalid(std::string("config: model: ") + e.what());
  }

  const json& portfolio = section(root, "portfolio");
  {
    std::set<std::string> allowed = {"gamma", "w0", "Ttilde"};
    for (int i = 1; i <= m; ++i) allowed.insert("T" + std::to_string(i));
    reject_unknown(portfolio, "portfolio", allowed);
  }
  cfg.maturities.resize(m);
  for (int i = 1; i <= m; ++i)
    cfg.maturities[i - 1] =
        require_num(portfolio, "portfolio", "T" + std::to_string(i));
  for (int i = 0; i + 1 < m; ++i)
    if (!(cfg.maturities[i] < cfg.maturities[i + 1]))
      throw ConfigInvalid("config: maturities must strictly increase");
  cfg.gamma = require_num(portfolio, "portfolio", "gamma");
  if (!(cfg.gamma > 0.0)) throw ConfigInvalid("config: gamma must be > 0");
  cfg.w0 = num_or(portfolio, "portfolio", "w0", 0.0);
  cfg.horizon = require_num(portfolio, "portfolio", "Ttilde");
  if (!(cfg.horizon > 0.0) || cfg.horizon > cfg.maturities[0] + 1e-12)
    throw ConfigInvalid("config: need 0 < Ttilde <= T1");

  const json empty = json::object();
  const json& numerics =
      root.contains("numerics") ? section(root, "numerics") : empty;
  reject_unknown(numerics, "numerics",
                 {"n_x", "n_t", "x_min", "x_max", "methods", "x_ref",
                  "curve_points", "h_steps", "ce_gammas", "ce_horizon",
                  "dump_stride_x", "dump_stride_t"});
  cfg.n_x = int_or(numerics, "numerics", "n_x", 1024);
  cfg.n_t = int_or(numerics, "numerics", "n_t", 400);
  if (cfg.n_x < 8) throw ConfigInvalid("config: numerics.n_x must be >= 8");
  if (cfg.n_t < 1) throw ConfigInvalid("config: numerics.n_t must be >= 1");

  if (cfg.spec.kind == ModelKind::Xou) {
    const double band =
        6.0 * (cfg.spec.sigma.array() / (2.0 * cfg.spec.kappa.array()).sqrt())
                  .maxCoeff();
    cfg.x_min = num_or(numerics, "numerics", "x_min",
                       cfg.spec.theta.minCoeff() - band);
    cfg.x_max = num_or(numerics, "numerics", "x_max",
                       cfg.spec.theta.maxCoeff() + band);
    if (!(cfg.x_min < cfg.x_max))
      throw ConfigInvalid("config: need x_min < x_max");
    cfg.x_ref = num_or(numerics, "numerics", "x_ref",
                       0.5 * (cfg.x_min + cfg.x_max));
  } else {
    cfg.x_ref = num_or(numerics, "numerics", "x_ref", 0.0);
  }

  if (numerics.contains("methods")) {
    const json& ms = numerics.at("methods");
    if (!ms.is_array() || ms.empty())
      throw ConfigInvalid("config: numerics.methods must be a non-empty array");
    for (const auto& v : ms) {
      if (!v.is_string())
        throw ConfigInvalid("config: numerics.methods entries must be strings");
      const std::string s = v.get<std::string>();
      if (s != "fdm" && s != "fst" && s != "separable")
        throw ConfigInvalid("config: unknown method '" + s + "'");
      cfg.methods.push_back(s);
    }
  } else if (cfg.spec.kind == ModelKind::Xou) {
    cfg.methods = {"fdm"};
  }
  cfg.curve_points = int_or(numerics, "numerics", "curve_points", 101);
  if (cfg.curve_points < 2)
    throw ConfigInvalid("config: numerics.curve_points must be >= 2");
  cfg.h_steps = int_or(numerics, "numerics", "h_steps", 1000);
  if (cfg.h_steps < 1) throw ConfigInvalid("config: numerics.h_steps must be >= 1");
  if (numerics.contains("ce_gammas")) {
    const json& gs = numerics.at("ce_gammas");
    if (!gs.is_array() || gs.empty())
      throw ConfigInvalid("config: numerics.ce_gammas must be a non-empty array");
    for (const auto& v : gs) {
      if (!v.is_number())
        throw ConfigInvalid("config: numerics.ce_gammas entries must be numbers");
      const double g = v.get<double>();
      if (!(g > 0.0)) throw ConfigInvalid("config: ce gammas must be > 0");
      cfg.ce_gammas.push_back(g);
    }
  } else {
    cfg.ce_gammas = {cfg.gamma};
  }
  cfg.ce_horizon = num_or(numerics, "numerics", "ce_horizon", cfg.horizon);
  if (!(cfg.ce_horizon > 0.0))
    throw ConfigInvalid("config: numerics.ce_horizon must be > 0");
  cfg.dump_stride_x = int_or(numerics, "numerics", "dump_stride_x",
                             std::max(1, cfg.n_x / 128));
  cfg.dump_stride_t = int_or(numerics, "numerics", "dump_stride_t",
                             std::max(1, cfg.n_t / 100));
  if (cfg.dump_stride_x < 1 || cfg.dump_stride_t < 1)
    throw ConfigInvalid("config: dump strides must be >= 1");

  const json& sim =
      root.contains("simulation") ? section(root, "simulation") : empty;
  reject_unknown(sim, "simulation",
                 {"paths", "seed", "dt", "x0", "initial_regime", "threads",
                  "switch_times", "out_dir"});
  cfg.sim.horizon = cfg.horizon;
  cfg.sim.gamma = cfg.gamma;
  cfg.sim.w0 = cfg.w0;
  cfg.sim.paths = int_or(sim, "simulation", "paths", 1);
  if (cfg.sim.paths < 1) throw ConfigInvalid("config: simulation.paths must be >= 1");
  if (sim.contains("seed")) {
    const json& v = sim.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ConfigInvalid("config: simulation.seed must be an integer");
    cfg.sim.seed = v.get<std::uint64_t>();
  }
  cfg.sim.dt = num_or(sim, "simulation", "dt", 1e-3 * cfg.horizon);
  if (!(cfg.sim.dt > 0.0)) throw ConfigInvalid("config: simulation.dt must be > 0");
  const double default_x0 =
      cfg.spec.kind == ModelKind::Xou ? 0.5 * (cfg.x_min + cfg.x_max) : 0.0;
  cfg.sim.x0 = num_or(sim, "simulation", "x0", default_x0);
  cfg.sim.initial_regime = int_or(sim, "simulation", "initial_regime", 1);
  if (cfg.sim.initial_regime < 1 || cfg.sim.initial_regime > m)
    throw ConfigInvalid("config: simulation.initial_regime out of range");
  cfg.sim.threads = int_or(sim, "simulation", "threads", 1);
  if (cfg.sim.threads < 1)
    throw ConfigInvalid("config: simulation.threads must be >= 1");
  cfg.out_dir = sim.contains("out_dir") ? sim.at("out_dir").get<std::string>()
                                        : std::string("out");

  if (sim.contains("switch_times")) {
    const json& sw = sim.at("switch_times");
    if (!sw.is_array())
      throw ConfigInvalid("config: simulation.switch_times must be an array");
    RegimePath path;
    path.t0 = 0.0;
    path.t1 = cfg.horizon;
    path.initial_state = cfg.sim.initial_regime;
    int prev = path.initial_state;
    double prev_t = 0.0;
    for (const auto& entry : sw) {
      if (!entry.is_array() || entry.size() != 2 || !entry.at(0).is_number() ||
          !entry.at(1).is_number_integer())
        throw ConfigInvalid(
            "config: switch_times entries must be [time, state]");
      const double tt = entry.at(0).get<double>();
      const int st = entry.at(1).get<int>();
      if (!(tt > prev_t) || tt > cfg.horizon)
        throw ConfigInvalid("config: switch times must increase within (0, Ttilde]");
      if (st < 1 || st > m || st == prev)
        throw ConfigInvalid("config: switch states must change and stay in range");
      path.jumps.push_back({tt, st});
      cfg.forced_switches.emplace_back(tt, st);
      prev = st;
      prev_t = tt;
    }
    cfg.forced = std::move(path);
  }

  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  json root;
  const int m = cfg.spec.regimes();

  json model;
  if (cfg.spec.kind == ModelKind::Gbm) {
    model["kind"] = "gbm";
    for (int i = 1; i <= m; ++i) {
      model["mu_" + std::to_string(i)] = cfg.spec.mu[i - 1];
      model["sigma_" + std::to_string(i)] = cfg.spec.sigma[i - 1];
      model["zeta_" + std::to_string(i)] = cfg.spec.zeta[i - 1];
    }
  } else {
    model["kind"] = "xou";
    for (int i = 1; i <= m; ++i) {
      model["kappa_" + std::to_string(i)] = cfg.spec.kappa[i - 1];
      model["theta_" + std::to_string(i)] = cfg.spec.theta[i - 1];
      model["sigma_" + std::to_string(i)] = cfg.spec.sigma[i - 1];
      model["zeta_" + std::to_string(i)] = cfg.spec.zeta[i - 1];
    }
  }
  root["model"] = model;

  json measures;
  auto dump_matrix = [m](const Matrix& a) {
    json rows = json::array();
    for (int i = 0; i < m; ++i) {
      json row = json::array();
      for (int j = 0; j < m; ++j) row.push_back(a(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  measures["q"] = dump_matrix(cfg.spec.measures.physical.rates);
  measures["qt"] = dump_matrix(cfg.spec.measures.risk_neutral.rates);
  root["measures"] = measures;

  json portfolio;
  for (int i = 1; i <= m; ++i)
    portfolio["T" + std::to_string(i)] = cfg.maturities[i - 1];
  portfolio["gamma"] = cfg.gamma;
  portfolio["w0"] = cfg.w0;
  portfolio["Ttilde"] = cfg.horizon;
  root["portfolio"] = portfolio;

  json numerics;
  numerics["n_x"] = cfg.n_x;
  numerics["n_t"] = cfg.n_t;
  if (cfg.spec.kind == ModelKind::Xou) {
    numerics["x_min"] = cfg.x_min;
    numerics["x_max"] = cfg.x_max;
  }
  if (!cfg.methods.empty()) numerics["methods"] = cfg.methods;
  numerics["x_ref"] = cfg.x_ref;
  numerics["curve_points"] = cfg.curve_points;
  numerics["h_steps"] = cfg.h_steps;
  numerics["ce_gammas"] = cfg.ce_gammas;
  numerics["ce_horizon"] = cfg.ce_horizon;
  numerics["dump_stride_x"] = cfg.dump_stride_x;
  numerics["dump_stride_t"] = cfg.dump_stride_t;
  root["numerics"] = numerics;

  json sim;
  sim["paths"] = cfg.sim.paths;
  sim["seed"] = cfg.sim.seed;
  sim["dt"] = cfg.sim.dt;
  sim["x0"] = cfg.sim.x0;
  sim["initial_regime"] = cfg.sim.initial_regime;
  sim["threads"] = cfg.sim.threads;
  sim["out_dir"] = cfg.out_dir;
  if (!cfg.forced_switches.empty()) {
    json sw = json::array();
    for (const auto& [tt, st] : cfg.forced_switches)
      sw.push_back(json::array({tt, st}));
    sim["switch_times"] = sw;
  }
  root["simulation"] = sim;

  return root;
}

std::string canonical_config_dump(const RunConfig& cfg) {
  return config_to_json(cfg).dump();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace rsf
