#include "hysid/config.hpp"

#include "hysid/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hysid {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& known, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown configuration key '" + (path.empty() ? key : path + "." + key) +
                        "'");
    }
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, const T& fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("configuration key '" + (path.empty() ? key : path + "." + key) +
                      "' has the wrong type");
  }
}

PoolSettings parse_pool(const json& obj, const std::string& path, PoolSettings base) {
  check_keys(obj, {"ell", "n_y", "n_u", "exclusions", "compensator_ready", "forced_terms",
                   "max_terms"}, path);
  base.ell = get_or(obj, "ell", base.ell, path);
  base.n_y = get_or(obj, "n_y", base.n_y, path);
  base.n_u = get_or(obj, "n_u", base.n_u, path);
  base.exclusions = get_or(obj, "exclusions", base.exclusions, path);
  base.compensator_ready = get_or(obj, "compensator_ready", base.compensator_ready, path);
  base.forced_terms = get_or(obj, "forced_terms", base.forced_terms, path);
  base.max_terms = get_or(obj, "max_terms", base.max_terms, path);
  if (base.ell < 1) throw ConfigError(path + ".ell must be >= 1");
  if (base.n_y < 1 || base.n_u < 1) throw ConfigError(path + ".n_y/.n_u must be >= 1");
  if (base.max_terms < 1) throw ConfigError(path + ".max_terms must be >= 1");
  return base;
}

SinusoidSettings parse_sinusoid(const json& obj, const std::string& path, SinusoidSettings base) {
  check_keys(obj, {"kind", "amplitude", "freq_hz", "offset", "duration_s"}, path);
  if (obj.contains("kind") && obj.at("kind") != "sinusoid") {
    throw ConfigError(path + ".kind must be 'sinusoid'");
  }
  base.amplitude = get_or(obj, "amplitude", base.amplitude, path);
  base.freq_hz = get_or(obj, "freq_hz", base.freq_hz, path);
  base.offset = get_or(obj, "offset", base.offset, path);
  base.duration_s = get_or(obj, "duration_s", base.duration_s, path);
  if (!(base.freq_hz > 0.0)) throw ConfigError(path + ".freq_hz must be > 0");
  if (!(base.duration_s > 0.0)) throw ConfigError(path + ".duration_s must be > 0");
  return base;
}

}  // namespace

Eigen::Index ExperimentConfig::transient_skip_samples(double freq_hz, double sample_time) const {
  const double periods = metrics.transient_skip_periods;
  return static_cast<Eigen::Index>(std::llround(periods / (freq_hz * sample_time)));
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + origin + "' is not valid JSON: " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config '" + origin + "' must be a JSON object");
  check_keys(root, {"format_version", "pool", "inverse_pool", "estimator", "plant", "sim",
                    "excitation", "validation", "reference", "compensation", "metrics"},
             "");
  if (get_or(root, "format_version", 1, "") != 1) {
    throw ConfigError("unsupported config format_version in '" + origin + "'");
  }

  ExperimentConfig cfg;
  if (root.contains("pool")) cfg.pool = parse_pool(root["pool"], "pool", cfg.pool);
  {
    // inverse defaults: unit lags, no direct-synthesis filter
    PoolSettings inv = cfg.pool;
    inv.n_u = 1;
    inv.compensator_ready = false;
    cfg.inverse_pool = root.contains("inverse_pool")
                           ? parse_pool(root["inverse_pool"], "inverse_pool", inv)
                           : inv;
  }
  if (root.contains("estimator")) {
    const auto& e = root["estimator"];
    check_keys(e, {"constrain_continuum"}, "estimator");
    cfg.estimator.constrain_continuum =
        get_or(e, "constrain_continuum", cfg.estimator.constrain_continuum, "estimator");
  }
  if (root.contains("plant")) {
    const auto& p = root["plant"];
    check_keys(p, {"d_p", "A", "beta", "gamma"}, "plant");
    cfg.plant.d_p = get_or(p, "d_p", cfg.plant.d_p, "plant");
    cfg.plant.A = get_or(p, "A", cfg.plant.A, "plant");
    cfg.plant.beta = get_or(p, "beta", cfg.plant.beta, "plant");
    cfg.plant.gamma = get_or(p, "gamma", cfg.plant.gamma, "plant");
    cfg.plant.validate();
    cfg.has_plant = true;
  }
  if (root.contains("sim")) {
    const auto& s = root["sim"];
    check_keys(s, {"dt", "T_s", "duration_s", "seed"}, "sim");
    cfg.sim.dt = get_or(s, "dt", cfg.sim.dt, "sim");
    cfg.sim.T_s = get_or(s, "T_s", cfg.sim.T_s, "sim");
    cfg.sim.duration = get_or(s, "duration_s", cfg.sim.duration, "sim");
    cfg.sim.seed = get_or<std::uint64_t>(s, "seed", cfg.sim.seed, "sim");
    cfg.sim.validate();
  }
  if (root.contains("excitation")) {
    const auto& e = root["excitation"];
    check_keys(e, {"kind", "cutoff_hz", "order", "amplitude", "freq_hz", "offset"}, "excitation");
    cfg.excitation.kind = get_or<std::string>(e, "kind", cfg.excitation.kind, "excitation");
    if (cfg.excitation.kind != "filtered_noise" && cfg.excitation.kind != "sinusoid") {
      throw ConfigError("excitation.kind must be 'filtered_noise' or 'sinusoid'");
    }
    cfg.excitation.cutoff_hz = get_or(e, "cutoff_hz", cfg.excitation.cutoff_hz, "excitation");
    cfg.excitation.order = get_or(e, "order", cfg.excitation.order, "excitation");
    cfg.excitation.amplitude = get_or(e, "amplitude", cfg.excitation.amplitude, "excitation");
    cfg.excitation.freq_hz = get_or(e, "freq_hz", cfg.excitation.freq_hz, "excitation");
    cfg.excitation.offset = get_or(e, "offset", cfg.excitation.offset, "excitation");
    if (!(cfg.excitation.cutoff_hz > 0.0)) throw ConfigError("excitation.cutoff_hz must be > 0");
    if (cfg.excitation.order < 1) throw ConfigError("excitation.order must be >= 1");
    cfg.has_excitation = true;
  }
  if (root.contains("validation")) {
    cfg.validation = parse_sinusoid(root["validation"], "validation", cfg.validation);
  }
  if (root.contains("reference")) {
    cfg.reference = parse_sinusoid(root["reference"], "reference", cfg.reference);
  }
  if (root.contains("compensation")) {
    const auto& c = root["compensation"];
    check_keys(c, {"tau_d", "tau_s", "smoothing_window"}, "compensation");
    cfg.compensation.tau_d = get_or(c, "tau_d", cfg.compensation.tau_d, "compensation");
    cfg.compensation.tau_s = get_or(c, "tau_s", cfg.compensation.tau_s, "compensation");
    cfg.compensation.smoothing_window =
        get_or(c, "smoothing_window", cfg.compensation.smoothing_window, "compensation");
    if (cfg.compensation.tau_d < 1) throw ConfigError("compensation.tau_d must be >= 1");
    if (cfg.compensation.tau_s < cfg.compensation.tau_d + 1) {
      throw ConfigError("compensation.tau_s must be >= tau_d + 1");
    }
  }
  if (root.contains("metrics")) {
    const auto& m = root["metrics"];
    check_keys(m, {"transient_skip_periods", "nsavi_literal", "nsavi_epsilon"}, "metrics");
    cfg.metrics.transient_skip_periods =
        get_or(m, "transient_skip_periods", cfg.metrics.transient_skip_periods, "metrics");
    cfg.metrics.nsavi_literal = get_or(m, "nsavi_literal", cfg.metrics.nsavi_literal, "metrics");
    cfg.metrics.nsavi_epsilon = get_or(m, "nsavi_epsilon", cfg.metrics.nsavi_epsilon, "metrics");
    if (cfg.metrics.transient_skip_periods < 0.0) {
      throw ConfigError("metrics.transient_skip_periods must be >= 0");
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_experiment_config(ss.str(), path);
}

}  // namespace hysid
