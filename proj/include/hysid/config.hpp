#pragma once

#include "hysid/bouc_wen.hpp"

#include <string>
#include <vector>

namespace hysid {

struct PoolSettings {
  int ell{3};
  int n_y{1};
  int n_u{2};
  bool exclusions{true};
  bool compensator_ready{false};
  std::vector<std::string> forced_terms;
  int max_terms{6};
};

struct EstimatorSettings {
  bool constrain_continuum{true};
};

struct SinusoidSettings {
  double amplitude{40.0};
  double freq_hz{1.0};
  double offset{0.0};
  double duration_s{5.0};
};

struct ExcitationSettings {
  std::string kind{"filtered_noise"};  // or "sinusoid"
  double cutoff_hz{1.0};
  int order{5};
  double amplitude{70.0};
  double freq_hz{1.0};
  double offset{0.0};
};

struct CompensationSettings {
  int tau_d{1};
  int tau_s{2};
  int smoothing_window{0};  // 0 disables the inverse-identification smoother
};

struct MetricsSettings {
  double transient_skip_periods{1.0};
  bool nsavi_literal{false};
  double nsavi_epsilon{0.0};
};

struct ExperimentConfig {
  PoolSettings pool;
  PoolSettings inverse_pool;
  EstimatorSettings estimator;
  BoucWenParams plant;
  SimConfig sim;
  ExcitationSettings excitation;
  SinusoidSettings validation;
  SinusoidSettings reference;
  CompensationSettings compensation;
  MetricsSettings metrics;

  bool has_plant{false};
  bool has_excitation{false};

  /// Skip expressed in samples of the given sampling time, one reference
  /// period by default.
  Eigen::Index transient_skip_samples(double freq_hz, double sample_time) const;
};

/// Parses and validates the JSON experiment configuration. Unknown keys are
/// rejected with a path-to-key diagnostic.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin);

}  // namespace hysid
