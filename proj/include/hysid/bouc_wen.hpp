#pragma once

#include "hysid/signal.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace hysid {

/// Bouc-Wen piezoelectric actuator parameters:
///   h' = A u' - beta |u'| h - gamma u' |h|,  y = d_p u - h.
struct BoucWenParams {
  double d_p{1.6};    // um/V
  double A{0.9};      // um/V
  double beta{0.008};   // 1/V
  double gamma{0.008};  // 1/V

  void validate() const;
};

/// Integration and sampling setup. T_s must be an integer multiple of dt and
/// duration an integer multiple of T_s.
struct SimConfig {
  double dt{1e-3};       // integration step, s
  double T_s{1e-3};      // sampling time, s
  double duration{1.0};  // s; N = duration / T_s samples
  std::uint64_t seed{0};

  void validate() const;
  Eigen::Index n_samples() const;
  Eigen::Index decimation() const;  // T_s / dt
};

/// Input for the integrator: u and du/dt at arbitrary stage times.
class PlantDrive {
 public:
  virtual ~PlantDrive() = default;
  virtual double u(double t) const = 0;
  virtual double du(double t) const = 0;
};

/// Analytic sinusoid drive; derivative is exact.
class SinusoidDrive final : public PlantDrive {
 public:
  SinusoidDrive(double amplitude, double freq_hz, double offset = 0.0);
  double u(double t) const override;
  double du(double t) const override;

 private:
  double amplitude_, omega_, offset_;
};

/// Tabulated drive: linear interpolation of the samples; derivative from
/// central differences on the table grid (one-sided at the edges),
/// interpolated linearly between nodes.
class TabulatedDrive final : public PlantDrive {
 public:
  explicit TabulatedDrive(Signal samples);
  double u(double t) const override;
  double du(double t) const override;

 private:
  Signal table_;
  Eigen::VectorXd deriv_;
};

/// RK4-integrates the hysteretic state with h(0) = 0 and returns the input
/// and output channels decimated to T_s. Throws NumericError with the time
/// stamp if the state diverges.
std::pair<Signal, Signal> simulate_bouc_wen(const BoucWenParams& params,
                                            const PlantDrive& drive,
                                            const SimConfig& cfg);

/// Loop geometry for one beta value of the sweep.
struct LoopGeometry {
  double beta{0.0};
  double width{0.0};   // maximum vertical opening between branches
  double height{0.0};  // output range over the cycle
  bool diverged{false};
};

/// Simulates one validation period (40 V, 1 Hz by default) per beta in
/// [beta_lo, beta_hi] with the given step and records loop geometry.
/// Divergent runs are recorded and the sweep continues.
std::vector<LoopGeometry> beta_sweep(const BoucWenParams& base, double beta_lo,
                                     double beta_hi, double beta_step,
                                     const SimConfig& cfg, double amplitude = 40.0,
                                     double freq_hz = 1.0);

}  // namespace hysid
