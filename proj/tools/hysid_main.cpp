// Command-line front end: identification and compensation pipelines wired
// from file to file so every stage is inspectable and reproducible.

#include "hysid/analysis.hpp"
#include "hysid/bouc_wen.hpp"
#include "hysid/compensator.hpp"
#include "hysid/config.hpp"
#include "hysid/dataset.hpp"
#include "hysid/errors.hpp"
#include "hysid/excitation.hpp"
#include "hysid/metrics.hpp"
#include "hysid/pipeline.hpp"
#include "hysid/regression.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "hysid 0.1.0";

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

hysid::ExperimentConfig load_config(const GlobalArgs& g) {
  if (g.config_path.empty()) throw hysid::ConfigError("--config is required for this command");
  auto cfg = hysid::load_experiment_config(g.config_path);
  if (g.seed_set) cfg.sim.seed = g.seed;
  return cfg;
}

class Manifest {
 public:
  Manifest(const GlobalArgs& g, const std::string& command) : out_dir_(g.out_dir) {
    fs::create_directories(out_dir_);
    j_["tool_version"] = kToolVersion;
    j_["command"] = command;
    j_["config"] = g.config_path;
    if (g.seed_set) j_["seed_override"] = g.seed;
    j_["outputs"] = json::array();
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    j_["timestamp_unix_s"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  }

  std::string path(const std::string& name) {
    j_["outputs"].push_back(name);
    return (fs::path(out_dir_) / name).string();
  }

  void note(const std::string& key, const json& value) { j_[key] = value; }

  ~Manifest() {
    std::ofstream os(fs::path(out_dir_) / "manifest.json");
    os << j_.dump(2) << "\n";
  }

 private:
  std::string out_dir_;
  json j_;
};

json plant_meta(const hysid::ExperimentConfig& cfg) {
  return json{{"d_p", cfg.plant.d_p},
              {"A", cfg.plant.A},
              {"beta", cfg.plant.beta},
              {"gamma", cfg.plant.gamma},
              {"dt_s", cfg.sim.dt},
              {"seed", cfg.sim.seed},
              {"generator", hysid::GaussianNoise::generator_name()}};
}

int cmd_excite(const GlobalArgs& g) {
  const auto cfg = load_config(g);
  Manifest man(g, "excite");
  const hysid::Signal u = hysid::make_excitation(cfg);
  json meta = plant_meta(cfg);
  meta["kind"] = cfg.excitation.kind;
  hysid::write_dataset(man.path("excitation.csv"), u, u, meta);
  std::cout << "wrote excitation: " << u.size() << " samples at dt = " << u.sample_time << " s\n";
  return 0;
}

int cmd_simulate_plant(const GlobalArgs& g, bool validation) {
  const auto cfg = load_config(g);
  if (!cfg.has_plant) throw hysid::ConfigError("config has no plant section");
  Manifest man(g, validation ? "simulate-plant --validation" : "simulate-plant");
  json meta = plant_meta(cfg);
  if (validation) {
    auto [u, y] = hysid::make_validation_data(cfg);
    meta["kind"] = "sinusoid";
    meta["amplitude"] = cfg.validation.amplitude;
    meta["freq_hz"] = cfg.validation.freq_hz;
    hysid::write_dataset(man.path("validation.csv"), u, y, meta);
    std::cout << "wrote validation.csv: " << u.size() << " samples\n";
  } else {
    auto [u, y] = hysid::make_training_data(cfg);
    meta["kind"] = cfg.excitation.kind;
    hysid::write_dataset(man.path("training.csv"), u, y, meta);
    std::cout << "wrote training.csv: " << u.size() << " samples\n";
  }
  return 0;
}

int cmd_identify(const GlobalArgs& g, const std::string& data_path, bool inverse, int tau_s_flag) {
  const auto cfg = load_config(g);
  Manifest man(g, inverse ? "identify --inverse" : "identify");
  auto [u, y, meta] = hysid::read_dataset(data_path);

  hysid::IdentifyOutcome outcome;
  if (inverse) {
    const int tau_s = tau_s_flag > 0 ? tau_s_flag : cfg.compensation.tau_s;
    hysid::Signal ys = cfg.compensation.smoothing_window > 0
                           ? hysid::smooth_quadratic(y, cfg.compensation.smoothing_window)
                           : y;
    auto [input, target] = hysid::shift_for_inverse(u, ys, tau_s, cfg.compensation.tau_d);
    outcome = hysid::identify_from_data(input, target, cfg.inverse_pool, cfg.estimator,
                                        cfg.compensation.tau_d, tau_s);
  } else {
    outcome = hysid::identify_from_data(u, y, cfg.pool, cfg.estimator, cfg.compensation.tau_d);
  }

  const std::string model_name = inverse ? "inverse_model.txt" : "model.txt";
  hysid::write_model_file(man.path(model_name), outcome.model);
  {
    std::ofstream rs(man.path(inverse ? "inverse_selection.tsv" : "selection.tsv"));
    hysid::write_selection_report(rs, outcome.report);
  }
  man.note("sigma_y", outcome.steady.sigma_y);
  man.note("steady_state", hysid::to_string(outcome.steady.classification));
  std::cout << "identified " << outcome.model.terms.size() << "-term model; sigma_y = "
            << outcome.steady.sigma_y << " (" << hysid::to_string(outcome.steady.classification)
            << ")\n";
  return 0;
}

int cmd_analyze(const GlobalArgs& g, const std::string& model_path, double u_min, double u_max,
                int grid, double phi1) {
  Manifest man(g, "analyze");
  const hysid::NarxModel model = hysid::read_model_file(model_path);
  if (grid < 1) throw hysid::ConfigError("grid size must be >= 1");
  if (phi1 <= 0.0) {
    // representative slow increment: mean |du| of a 1 Hz full-range sweep
    phi1 = 4.0 * std::max(std::abs(u_min), std::abs(u_max)) * 1.0 * model.sample_time;
  }
  Eigen::VectorXd ug(grid);
  for (int i = 0; i < grid; ++i) {
    ug[i] = grid == 1 ? u_min : u_min + (u_max - u_min) * i / (grid - 1.0);
  }
  const auto loading = hysid::quasi_static_solve(model, ug, phi1, hysid::Branch::Loading);
  const auto unloading = hysid::quasi_static_solve(model, ug, phi1, hysid::Branch::Unloading);
  {
    std::ofstream os(man.path("curve_loading.tsv"));
    hysid::write_curve(os, loading);
  }
  {
    std::ofstream os(man.path("curve_unloading.tsv"));
    hysid::write_curve(os, unloading);
  }
  std::cout << "wrote quasi-static curves (phi1 = " << phi1 << ")\n";
  return 0;
}

int cmd_synthesize(const GlobalArgs& g, const std::string& model_path,
                   const std::string& strategy) {
  Manifest man(g, "synthesize --strategy " + strategy);
  const hysid::NarxModel model = hysid::read_model_file(model_path);
  hysid::CompensatorLaw law;
  if (strategy == "direct") {
    law = hysid::synthesize_direct(model);
  } else if (strategy == "inverse") {
    law = hysid::synthesize_inverse(model);
  } else {
    throw hysid::ConfigError("strategy must be 'direct' or 'inverse'");
  }
  hysid::write_law_file(man.path("law.txt"), law);
  std::cout << "synthesized " << strategy << " law: " << law.terms.size()
            << " terms, horizon " << law.horizon << "\n";
  return 0;
}

int cmd_compensate(const GlobalArgs& g, const std::string& law_path, bool no_compensation) {
  const auto cfg = load_config(g);
  if (!cfg.has_plant) throw hysid::ConfigError("config has no plant section");
  Manifest man(g, no_compensation ? "compensate --no-compensation" : "compensate");

  const auto n = static_cast<Eigen::Index>(
      std::llround(cfg.reference.duration_s / cfg.sim.T_s));
  const hysid::Signal r = hysid::make_sinusoid(cfg.reference.amplitude, cfg.reference.freq_hz,
                                               cfg.reference.offset, n, cfg.sim.T_s);
  const auto skip = cfg.transient_skip_samples(cfg.reference.freq_hz, cfg.sim.T_s);

  hysid::Signal m = r;
  if (!no_compensation) {
    const hysid::CompensatorLaw law = hysid::read_law_file(law_path);
    m = hysid::run_compensator(law, r);
  }
  const hysid::Signal y = hysid::run_plant(cfg, m);
  const Eigen::Index L = std::min({m.size(), y.size(), r.size()});
  const hysid::Signal r_al{Eigen::VectorXd(r.samples.head(L)), r.sample_time};
  const hysid::Signal y_al{Eigen::VectorXd(y.samples.head(L)), y.sample_time};
  const hysid::Signal m_al{Eigen::VectorXd(m.samples.head(L)), m.sample_time};

  hysid::MetricsSummary summary;
  summary.mape = hysid::mape(r_al, y_al, skip);
  summary.nsavi = cfg.metrics.nsavi_literal
                      ? hysid::nsavi_pointwise(m_al, r_al, skip, cfg.metrics.nsavi_epsilon)
                      : hysid::nsavi(m_al, r_al, skip);
  summary.n_samples = L;
  summary.transient_skip = skip;

  hysid::write_dataset(man.path("compensation.csv"), m_al, y_al,
                       json{{"reference_amplitude", cfg.reference.amplitude},
                            {"reference_freq_hz", cfg.reference.freq_hz}});
  {
    std::ofstream os(man.path("metrics.txt"));
    hysid::write_metrics(os, summary);
  }
  man.note("mape_percent", summary.mape);
  man.note("nsavi", summary.nsavi);
  std::cout << "MAPE = " << summary.mape << " %, NSAVI = " << summary.nsavi << "\n";
  return 0;
}

int cmd_sweep_sampling(const GlobalArgs& g, const std::vector<double>& ts_list) {
  const auto cfg = load_config(g);
  if (!cfg.has_plant) throw hysid::ConfigError("config has no plant section");
  Manifest man(g, "sweep-sampling");

  std::ofstream table(man.path("sampling_sweep.tsv"));
  table << "T_s\tmodel_mape\ttracking_mape\n";
  std::cout << "T_s\tmodel_mape\ttracking_mape\n";
  for (const double ts : ts_list) {
    hysid::ExperimentConfig c = cfg;
    c.sim.T_s = ts;
    c.sim.validate();  // rejects T_s not a multiple of dt
    auto [u_tr, y_tr] = hysid::make_training_data(c);
    const auto outcome =
        hysid::identify_from_data(u_tr, y_tr, c.pool, c.estimator, c.compensation.tau_d);

    hysid::ExperimentConfig cv = c;
    cv.validation.duration_s = cfg.validation.duration_s;
    auto [u_val, y_val] = hysid::make_validation_data(cv);
    const auto skip_v = cv.transient_skip_samples(cv.validation.freq_hz, ts);
    const hysid::Signal yh =
        hysid::free_run(outcome.model, u_val, y_val.samples.head(outcome.model.n_y));
    const double model_mape = hysid::mape(y_val, yh, skip_v);

    const hysid::CompensatorLaw law = hysid::synthesize_direct(outcome.model);
    const auto nr = static_cast<Eigen::Index>(std::llround(c.reference.duration_s / ts));
    const hysid::Signal r = hysid::make_sinusoid(c.reference.amplitude, c.reference.freq_hz,
                                                 c.reference.offset, nr, ts);
    const auto skip_r = c.transient_skip_samples(c.reference.freq_hz, ts);
    const auto chain = hysid::evaluate_chain(law, hysid::plant_evaluator(c), r, skip_r);

    char row[128];
    std::snprintf(row, sizeof(row), "%.17g\t%.6f\t%.6f", ts, model_mape, chain.mape);
    table << row << "\n";
    std::cout << row << "\n";
  }
  return 0;
}

int cmd_report(const GlobalArgs& g) {
  const fs::path dir(g.out_dir);
  const fs::path manifest = dir / "manifest.json";
  if (!fs::exists(manifest)) {
    throw hysid::ConfigError("no manifest.json under '" + g.out_dir + "'");
  }
  std::ifstream is(manifest);
  json j;
  is >> j;
  std::cout << "experiment under " << g.out_dir << "\n";
  std::cout << "  tool:    " << j.value("tool_version", "?") << "\n";
  std::cout << "  command: " << j.value("command", "?") << "\n";
  if (j.contains("sigma_y")) std::cout << "  sigma_y: " << j["sigma_y"] << "\n";
  if (j.contains("steady_state")) std::cout << "  steady_state: " << j["steady_state"] << "\n";
  if (j.contains("mape_percent")) std::cout << "  MAPE: " << j["mape_percent"] << " %\n";
  if (j.contains("nsavi")) std::cout << "  NSAVI: " << j["nsavi"] << "\n";
  for (const auto& o : j.value("outputs", json::array())) {
    std::cout << "  output: " << o.get<std::string>() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gray-box NARX hysteresis identification and compensation toolkit"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config_path, "experiment configuration (JSON)");
  app.add_option("--out", g.out_dir, "output directory (default: current)");
  auto* seed_opt = app.add_option("--seed", g.seed, "override the configured RNG seed");

  auto* excite = app.add_subcommand("excite", "generate the excitation signal");

  auto* sim = app.add_subcommand("simulate-plant", "simulate the Bouc-Wen plant");
  bool validation = false;
  sim->add_flag("--validation", validation, "use the validation sinusoid instead");

  auto* ident = app.add_subcommand("identify", "select structure and estimate parameters");
  std::string data_path;
  bool inverse = false;
  int tau_s_flag = 0;
  ident->add_option("--data", data_path, "training dataset (CSV)")->required();
  ident->add_flag("--inverse", inverse, "identify the inverse model");
  ident->add_option("--tau-s", tau_s_flag, "causality shift for inverse identification");

  auto* analyze = app.add_subcommand("analyze", "quasi-static attracting/repelling analysis");
  std::string model_path;
  double u_min = -70.0, u_max = 70.0, phi1 = 0.0;
  int grid = 281;
  analyze->add_option("--model", model_path, "model file")->required();
  analyze->add_option("--u-min", u_min, "grid lower bound");
  analyze->add_option("--u-max", u_max, "grid upper bound");
  analyze->add_option("--grid", grid, "grid size");
  analyze->add_option("--phi1", phi1, "slow-increment magnitude (default from grid span)");

  auto* synth = app.add_subcommand("synthesize", "derive a compensation law from a model");
  std::string synth_model, strategy = "direct";
  synth->add_option("--model", synth_model, "model file")->required();
  synth->add_option("--strategy", strategy, "direct | inverse");

  auto* comp = app.add_subcommand("compensate", "run a law against the plant");
  std::string law_path;
  bool no_comp = false;
  comp->add_option("--law", law_path, "law file");
  comp->add_flag("--no-compensation", no_comp, "baseline: feed the reference directly");

  auto* sweep = app.add_subcommand("sweep-sampling", "identification across sampling times");
  std::vector<double> ts_list;
  sweep->add_option("--ts", ts_list, "sampling times, s")->required();

  auto* report = app.add_subcommand("report", "summarize an experiment directory");

  CLI11_PARSE(app, argc, argv);
  g.seed_set = seed_opt->count() > 0;

  try {
    if (excite->parsed()) return cmd_excite(g);
    if (sim->parsed()) return cmd_simulate_plant(g, validation);
    if (ident->parsed()) return cmd_identify(g, data_path, inverse, tau_s_flag);
    if (analyze->parsed()) return cmd_analyze(g, model_path, u_min, u_max, grid, phi1);
    if (synth->parsed()) return cmd_synthesize(g, synth_model, strategy);
    if (comp->parsed()) {
      if (!no_comp && law_path.empty()) {
        throw hysid::ConfigError("compensate needs --law unless --no-compensation is given");
      }
      return cmd_compensate(g, law_path, no_comp);
    }
    if (sweep->parsed()) return cmd_sweep_sampling(g, ts_list);
    if (report->parsed()) return cmd_report(g);
  } catch (const hysid::ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return 2;
  } catch (const hysid::NumericError& e) {
    std::cerr << "error[numeric]: " << e.what() << "\n";
    return 3;
  } catch (const hysid::StructuralError& e) {
    std::cerr << "error[structural]: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
