#include "hysid/signal.hpp"

#include "hysid/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace hysid {

Signal::Signal(Eigen::VectorXd s, double ts) : samples(std::move(s)), sample_time(ts) {
  validate();
}

void Signal::validate() const {
  if (!(sample_time > 0.0)) {
    throw ConfigError("signal sample_time must be > 0, got " + std::to_string(sample_time));
  }
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw ConfigError("signal sample " + std::to_string(i) + " is not finite");
    }
  }
}

Signal Signal::decimated(Eigen::Index m) const {
  if (m < 1) throw ConfigError("decimation factor must be >= 1");
  const Eigen::Index n = (samples.size() + m - 1) / m;
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = samples[i * m];
  return Signal{out, sample_time * static_cast<double>(m)};
}

Signal make_sinusoid(double amplitude, double freq_hz, double offset,
                     Eigen::Index n, double sample_time) {
  if (n < 0) throw ConfigError("sinusoid length must be non-negative");
  if (sample_time > 0.0 && freq_hz >= 0.5 / sample_time) {
    throw ConfigError("sinusoid frequency " + std::to_string(freq_hz) +
                      " Hz is at or above Nyquist for sample time " +
                      std::to_string(sample_time) + " s");
  }
  Eigen::VectorXd s(n);
  const double w = 2.0 * M_PI * freq_hz * sample_time;
  for (Eigen::Index k = 0; k < n; ++k) s[k] = offset + amplitude * std::sin(w * static_cast<double>(k));
  return Signal{s, sample_time};
}

}  // namespace hysid
