#include "hysid/pipeline.hpp"

#include "hysid/errors.hpp"
#include "hysid/excitation.hpp"
#include "hysid/pool.hpp"
#include "hysid/regression.hpp"

#include <cmath>
#include <utility>

namespace hysid {

IdentifyOutcome identify_from_data(const Signal& input, const Signal& target,
                                   const PoolSettings& pool_cfg,
                                   const EstimatorSettings& est_cfg, int tau_d, int tau_s) {
  std::vector<Term> pool = generate_term_pool(
      pool_cfg.ell, pool_cfg.n_y, pool_cfg.n_u,
      pool_cfg.exclusions ? ExclusionRules::all() : ExclusionRules::none());
  if (pool_cfg.compensator_ready) {
    pool = filter_pool_for_direct_synthesis(std::move(pool), tau_d);
  }
  std::vector<Term> forced;
  forced.reserve(pool_cfg.forced_terms.size());
  for (const auto& s : pool_cfg.forced_terms) forced.push_back(Term::parse(s));

  IdentifyOutcome out;
  out.report = frols_select(pool, input, target, pool_cfg.max_terms, forced);
  const int size = aic_choose_size(out.report);

  std::vector<Term> structure;
  structure.reserve(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) structure.push_back(out.report.selected[static_cast<size_t>(i)].term);

  const RegressionData data = build_regressor_matrix(structure, input, target);
  LeastSquaresResult est;
  if (est_cfg.constrain_continuum) {
    const EqualityConstraint con = build_continuum_constraint(structure);
    est = constrained_least_squares(data.psi, data.target, con);
  } else {
    est = least_squares(data.psi, data.target);
  }
  for (const auto& w : est.warnings) out.report.notes.push_back(w);

  out.model = NarxModel::from_terms(std::move(structure), std::move(est.theta), tau_d, tau_s,
                                    input.sample_time);
  out.steady = steady_state_analyze(out.model);
  return out;
}

Signal make_excitation(const ExperimentConfig& cfg) {
  if (!cfg.has_excitation) throw ConfigError("config has no excitation section");
  if (cfg.excitation.kind == "sinusoid") {
    const auto n = static_cast<Eigen::Index>(std::llround(cfg.sim.duration / cfg.sim.dt));
    return make_sinusoid(cfg.excitation.amplitude, cfg.excitation.freq_hz, cfg.excitation.offset,
                         n, cfg.sim.dt);
  }
  return make_filtered_noise_excitation(cfg.excitation.cutoff_hz, cfg.excitation.order, cfg.sim,
                                        cfg.excitation.amplitude);
}

Signal run_plant(const ExperimentConfig& cfg, const Signal& input) {
  if (!cfg.has_plant) throw ConfigError("config has no plant section");
  SimConfig run = cfg.sim;
  run.T_s = input.sample_time;
  run.duration = static_cast<double>(input.size()) * input.sample_time;
  const TabulatedDrive drive(input);
  auto [u_s, y_s] = simulate_bouc_wen(cfg.plant, drive, run);
  return y_s;
}

std::pair<Signal, Signal> make_training_data(const ExperimentConfig& cfg) {
  if (!cfg.has_plant) throw ConfigError("config has no plant section");
  const Signal excitation = make_excitation(cfg);
  const TabulatedDrive drive(excitation);
  return simulate_bouc_wen(cfg.plant, drive, cfg.sim);
}

std::pair<Signal, Signal> make_validation_data(const ExperimentConfig& cfg) {
  if (!cfg.has_plant) throw ConfigError("config has no plant section");
  SimConfig run = cfg.sim;
  run.duration = cfg.validation.duration_s;
  const SinusoidDrive drive(cfg.validation.amplitude, cfg.validation.freq_hz,
                            cfg.validation.offset);
  return simulate_bouc_wen(cfg.plant, drive, run);
}

PlantEvaluator plant_evaluator(const ExperimentConfig& cfg) {
  return [cfg](const Signal& m) { return run_plant(cfg, m); };
}

}  // namespace hysid
