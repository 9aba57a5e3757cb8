#include "hysid/excitation.hpp"

#include "hysid/errors.hpp"

#include <cmath>
#include <utility>

namespace hysid {

double GaussianNoise::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] uniforms; u1 > 0 so the log is finite.
  const double norm = 1.0 / (static_cast<double>(std::mt19937_64::max()) + 1.0);
  const double u1 = (static_cast<double>(rng_()) + 1.0) * norm;
  const double u2 = static_cast<double>(rng_()) * norm;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

SosFilter::SosFilter(std::vector<Biquad> sections) : sections_(std::move(sections)) {
  if (sections_.empty()) throw ConfigError("SOS filter needs at least one section");
}

Eigen::VectorXd SosFilter::filter(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  for (const auto& s : sections_) {
    double z1 = 0.0, z2 = 0.0;
    for (Eigen::Index n = 0; n < y.size(); ++n) {
      const double w = y[n];
      const double out = s.b0 * w + z1;
      z1 = s.b1 * w - s.a1 * out + z2;
      z2 = s.b2 * w - s.a2 * out;
      y[n] = out;
    }
  }
  return y;
}

std::vector<std::complex<double>> SosFilter::poles() const {
  std::vector<std::complex<double>> out;
  for (const auto& s : sections_) {
    if (s.a2 == 0.0 && s.b2 == 0.0) {
      out.emplace_back(-s.a1, 0.0);
      continue;
    }
    const std::complex<double> disc = std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2));
    out.push_back((-s.a1 + disc) / 2.0);
    out.push_back((-s.a1 - disc) / 2.0);
  }
  return out;
}

bool SosFilter::is_stable() const {
  for (const auto& p : poles()) {
    if (std::abs(p) >= 1.0) return false;
  }
  return true;
}

SosFilter butterworth_lowpass(int order, double cutoff_hz, double fs_hz) {
  if (order < 1) throw ConfigError("filter order must be >= 1");
  if (!(cutoff_hz > 0.0) || cutoff_hz >= 0.5 * fs_hz) {
    throw ConfigError("cutoff " + std::to_string(cutoff_hz) +
                      " Hz must lie strictly below Nyquist of fs = " + std::to_string(fs_hz) +
                      " Hz");
  }
  // pre-warped analog cutoff
  const double wc = 2.0 * fs_hz * std::tan(M_PI * cutoff_hz / fs_hz);

  // analog prototype poles on the unit circle, scaled by wc, mapped by the
  // bilinear transform; conjugates share one section
  std::vector<Biquad> sections;
  const int n_pairs = order / 2;
  for (int k = 1; k <= n_pairs; ++k) {
    const double theta = M_PI * (2.0 * k + order - 1.0) / (2.0 * order);
    const std::complex<double> s = wc * std::exp(std::complex<double>(0.0, theta));
    const std::complex<double> z = (1.0 + s / (2.0 * fs_hz)) / (1.0 - s / (2.0 * fs_hz));
    Biquad q;
    q.a1 = -2.0 * z.real();
    q.a2 = std::norm(z);
    const double g = (1.0 + q.a1 + q.a2) / 4.0;  // unity DC gain
    q.b0 = g;
    q.b1 = 2.0 * g;
    q.b2 = g;
    sections.push_back(q);
  }
  if (order % 2 == 1) {
    const double s = -wc;  // the real prototype pole
    const double z = (1.0 + s / (2.0 * fs_hz)) / (1.0 - s / (2.0 * fs_hz));
    Biquad q;
    q.a1 = -z;
    q.a2 = 0.0;
    const double g = (1.0 + q.a1) / 2.0;
    q.b0 = g;
    q.b1 = g;
    q.b2 = 0.0;
    sections.push_back(q);
  }
  SosFilter filter(std::move(sections));
  if (!filter.is_stable()) {
    throw NumericError("Butterworth realization is unstable at cutoff " +
                       std::to_string(cutoff_hz) + " Hz, fs " + std::to_string(fs_hz) + " Hz");
  }
  return filter;
}

Signal make_filtered_noise_excitation(double cutoff_hz, int order, const SimConfig& cfg,
                                      double amplitude) {
  cfg.validate();
  const double fs = 1.0 / cfg.dt;
  const SosFilter filter = butterworth_lowpass(order, cutoff_hz, fs);

  const auto n = static_cast<Eigen::Index>(std::llround(cfg.duration / cfg.dt));
  GaussianNoise noise(cfg.seed);
  Eigen::VectorXd white(n);
  for (Eigen::Index i = 0; i < n; ++i) white[i] = noise.next();
  Eigen::VectorXd shaped = filter.filter(white);

  const double peak = shaped.cwiseAbs().maxCoeff();
  if (peak > 0.0) shaped *= amplitude / peak;
  return Signal{shaped, cfg.dt};
}

}  // namespace hysid
