#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace hysid {

/// Uniformly sampled real-valued sequence.
struct Signal {
  Eigen::VectorXd samples;
  double sample_time{1.0};  // seconds, > 0

  Signal() = default;
  Signal(Eigen::VectorXd s, double ts);

  Eigen::Index size() const { return samples.size(); }
  double operator[](Eigen::Index i) const { return samples[i]; }
  double& operator[](Eigen::Index i) { return samples[i]; }

  /// Throws ConfigError on non-positive sample time or non-finite samples.
  void validate() const;

  /// Every m-th sample, same origin.
  Signal decimated(Eigen::Index m) const;
};

/// samples[k] = offset + amplitude * sin(2*pi*freq_hz * k * sample_time)
Signal make_sinusoid(double amplitude, double freq_hz, double offset,
                     Eigen::Index n, double sample_time);

/// sign with sign(0) = 0, the three-valued convention used throughout.
inline double sign3(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace hysid
