#pragma once

#include "hysid/analysis.hpp"
#include "hysid/compensator.hpp"
#include "hysid/config.hpp"
#include "hysid/estimation.hpp"
#include "hysid/model.hpp"

namespace hysid {

struct IdentifyOutcome {
  NarxModel model;
  SelectionReport report;
  SteadyStateReport steady;
};

/// Pool generation, forward selection, AIC size choice, and (constrained)
/// parameter estimation over an input/target pair. For inverse-model
/// identification pass the shifted dataset and the tau_s it was built with.
IdentifyOutcome identify_from_data(const Signal& input, const Signal& target,
                                   const PoolSettings& pool_cfg,
                                   const EstimatorSettings& est_cfg, int tau_d,
                                   int tau_s = 0);

/// Excitation signal on the integration grid per the config (filtered noise
/// or sinusoid).
Signal make_excitation(const ExperimentConfig& cfg);

/// Plant output for an arbitrary input sampled at cfg.sim.T_s; integration
/// runs at cfg.sim.dt.
Signal run_plant(const ExperimentConfig& cfg, const Signal& input);

/// Training dataset (u, y) at cfg.sim.T_s from the configured excitation.
std::pair<Signal, Signal> make_training_data(const ExperimentConfig& cfg);

/// Validation dataset from the configured validation sinusoid.
std::pair<Signal, Signal> make_validation_data(const ExperimentConfig& cfg);

/// Plant evaluator bound to the config, for chain evaluation.
PlantEvaluator plant_evaluator(const ExperimentConfig& cfg);

}  // namespace hysid
