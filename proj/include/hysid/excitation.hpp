#pragma once

#include "hysid/bouc_wen.hpp"
#include "hysid/signal.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hysid {

/// Standard normal deviates from mt19937_64 through the Box-Muller transform.
/// The generator is named so dataset metadata can record it exactly.
class GaussianNoise {
 public:
  explicit GaussianNoise(std::uint64_t seed) : rng_(seed) {}
  double next();
  static std::string generator_name() { return "mt19937_64/box-muller"; }

 private:
  std::mt19937_64 rng_;
  bool have_spare_{false};
  double spare_{0.0};
};

/// One second-order section, direct form II transposed. a0 is 1.
struct Biquad {
  double b0{1.0}, b1{0.0}, b2{0.0};
  double a1{0.0}, a2{0.0};
};

/// Cascade of second-order sections (plus one first-order section for odd
/// orders, encoded with b2 = a2 = 0).
class SosFilter {
 public:
  explicit SosFilter(std::vector<Biquad> sections);

  Eigen::VectorXd filter(const Eigen::VectorXd& x) const;
  std::vector<std::complex<double>> poles() const;
  bool is_stable() const;
  const std::vector<Biquad>& sections() const { return sections_; }

 private:
  std::vector<Biquad> sections_;
};

/// Butterworth low-pass designed from the analog prototype by pre-warped
/// bilinear transform; conjugate pole pairs become unity-DC-gain biquads.
/// Throws ConfigError for cutoff at or above Nyquist, NumericError if the
/// realization is unstable.
SosFilter butterworth_lowpass(int order, double cutoff_hz, double fs_hz);

/// Gaussian white noise shaped by the Butterworth low-pass, scaled so the
/// peak magnitude equals `amplitude`. Generated on the integration grid
/// (sample time cfg.dt), deterministic per cfg.seed.
Signal make_filtered_noise_excitation(double cutoff_hz, int order, const SimConfig& cfg,
                                      double amplitude);

}  // namespace hysid
