#include "hysid/bouc_wen.hpp"

#include "hysid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace hysid {

void BoucWenParams::validate() const {
  if (!std::isfinite(d_p) || !std::isfinite(A) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw ConfigError("Bouc-Wen parameters must be finite");
  }
  if (beta < 0.0 || gamma < 0.0) throw ConfigError("Bouc-Wen beta and gamma must be >= 0");
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (T_s + 1e-15 < dt) throw ConfigError("T_s must be >= dt");
  const double m = T_s / dt;
  if (std::abs(m - std::round(m)) > 1e-9 * m) {
    throw ConfigError("T_s must be an integer multiple of dt");
  }
  const double n = duration / T_s;
  if (n < 1.0 || std::abs(n - std::round(n)) > 1e-9 * n) {
    throw ConfigError("duration must be a positive integer multiple of T_s");
  }
}

Eigen::Index SimConfig::n_samples() const {
  return static_cast<Eigen::Index>(std::llround(duration / T_s));
}

Eigen::Index SimConfig::decimation() const {
  return static_cast<Eigen::Index>(std::llround(T_s / dt));
}

SinusoidDrive::SinusoidDrive(double amplitude, double freq_hz, double offset)
    : amplitude_(amplitude), omega_(2.0 * M_PI * freq_hz), offset_(offset) {}

double SinusoidDrive::u(double t) const { return offset_ + amplitude_ * std::sin(omega_ * t); }

double SinusoidDrive::du(double t) const { return amplitude_ * omega_ * std::cos(omega_ * t); }

TabulatedDrive::TabulatedDrive(Signal samples) : table_(std::move(samples)) {
  if (table_.size() < 2) throw ConfigError("tabulated drive needs at least 2 samples");
  const Eigen::Index n = table_.size();
  const double ts = table_.sample_time;
  deriv_.resize(n);
  deriv_[0] = (table_[1] - table_[0]) / ts;
  for (Eigen::Index k = 1; k < n - 1; ++k) {
    deriv_[k] = (table_[k + 1] - table_[k - 1]) / (2.0 * ts);
  }
  deriv_[n - 1] = (table_[n - 1] - table_[n - 2]) / ts;
}

namespace {

double interp(const Eigen::VectorXd& v, double ts, double t) {
  const double x = t / ts;
  const auto n = v.size();
  if (x <= 0.0) return v[0];
  const auto i = static_cast<Eigen::Index>(x);
  if (i >= n - 1) return v[n - 1];
  const double frac = x - static_cast<double>(i);
  return v[i] + frac * (v[i + 1] - v[i]);
}

}  // namespace

double TabulatedDrive::u(double t) const { return interp(table_.samples, table_.sample_time, t); }

double TabulatedDrive::du(double t) const { return interp(deriv_, table_.sample_time, t); }

std::pair<Signal, Signal> simulate_bouc_wen(const BoucWenParams& params,
                                            const PlantDrive& drive, const SimConfig& cfg) {
  params.validate();
  cfg.validate();
  const Eigen::Index n = cfg.n_samples();
  const Eigen::Index m = cfg.decimation();
  const double dt = cfg.dt;

  Eigen::VectorXd u_s(n), y_s(n);
  double h = 0.0;
  u_s[0] = drive.u(0.0);
  y_s[0] = params.d_p * u_s[0] - h;

  const auto rhs = [&params](double hv, double duv) {
    return params.A * duv - params.beta * std::abs(duv) * hv - params.gamma * duv * std::abs(hv);
  };

  Eigen::Index step = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j, ++step) {
      const double t0 = static_cast<double>(step) * dt;
      const double d0 = drive.du(t0);
      const double dm = drive.du(t0 + 0.5 * dt);
      const double d1 = drive.du(t0 + dt);
      const double k1 = rhs(h, d0);
      const double k2 = rhs(h + 0.5 * dt * k1, dm);
      const double k3 = rhs(h + 0.5 * dt * k2, dm);
      const double k4 = rhs(h + dt * k3, d1);
      h += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!std::isfinite(h) || std::abs(h) > 1e15) {
        throw NumericError("Bouc-Wen state diverged at t = " + std::to_string(t0 + dt) + " s");
      }
    }
    const double t = static_cast<double>(step) * dt;
    u_s[i] = drive.u(t);
    y_s[i] = params.d_p * u_s[i] - h;
  }
  return {Signal{u_s, cfg.T_s}, Signal{y_s, cfg.T_s}};
}

std::vector<LoopGeometry> beta_sweep(const BoucWenParams& base, double beta_lo, double beta_hi,
                                     double beta_step, const SimConfig& cfg, double amplitude,
                                     double freq_hz) {
  if (!(beta_step > 0.0) || beta_hi < beta_lo) throw ConfigError("invalid beta sweep range");
  std::vector<LoopGeometry> out;
  const SinusoidDrive drive(amplitude, freq_hz);

  // two periods at the configured sampling; geometry measured on the second
  SimConfig run = cfg;
  run.duration = 2.0 / freq_hz;
  run.validate();

  const int n_steps = static_cast<int>(std::floor((beta_hi - beta_lo) / beta_step + 1e-9)) + 1;
  for (int s = 0; s < n_steps; ++s) {
    LoopGeometry g;
    g.beta = beta_lo + beta_step * s;
    BoucWenParams p = base;
    p.beta = g.beta;
    try {
      auto [u, y] = simulate_bouc_wen(p, drive, run);
      const Eigen::Index n = u.size();
      const Eigen::Index half = n / 2;
      // split the second period into loading/unloading by the sign of du
      std::vector<std::pair<double, double>> load, unload;
      for (Eigen::Index k = half + 1; k < n; ++k) {
        const double du = u[k] - u[k - 1];
        if (du > 0.0) load.emplace_back(u[k], y[k]);
        else if (du < 0.0) unload.emplace_back(u[k], y[k]);
      }
      std::sort(load.begin(), load.end());
      std::sort(unload.begin(), unload.end());
      auto interp_branch = [](const std::vector<std::pair<double, double>>& b, double uq) {
        auto it = std::lower_bound(b.begin(), b.end(), std::make_pair(uq, -1e300));
        if (it == b.begin()) return b.front().second;
        if (it == b.end()) return b.back().second;
        const auto [u1, y1] = *(it - 1);
        const auto [u2, y2] = *it;
        return u2 == u1 ? y1 : y1 + (y2 - y1) * (uq - u1) / (u2 - u1);
      };
      double width = 0.0;
      for (int q = 0; q <= 100; ++q) {
        const double uq = -0.9 * amplitude + 1.8 * amplitude * q / 100.0;
        width = std::max(width, std::abs(interp_branch(unload, uq) - interp_branch(load, uq)));
      }
      g.width = width;
      double ymin = y[half], ymax = y[half];
      for (Eigen::Index k = half; k < n; ++k) {
        ymin = std::min(ymin, y[k]);
        ymax = std::max(ymax, y[k]);
      }
      g.height = ymax - ymin;
    } catch (const NumericError&) {
      g.diverged = true;
    }
    out.push_back(g);
  }
  return out;
}

}  // namespace hysid
