#include "hysid/regression.hpp"

#include "hysid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hysid {

std::pair<Signal, Signal> compute_phi(const Signal& u) {
  const Eigen::Index n = u.size();
  if (n < 2) throw ConfigError("compute_phi needs at least 2 samples");
  Eigen::VectorXd p1 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd p2 = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 1; k < n; ++k) {
    p1[k] = u.samples[k] - u.samples[k - 1];
    p2[k] = sign3(p1[k]);
  }
  return {Signal{p1, u.sample_time}, Signal{p2, u.sample_time}};
}

Eigen::Index regression_start(const std::vector<Term>& terms) {
  Eigen::Index s = 0;
  for (const auto& t : terms) {
    for (const auto& f : t.factors()) {
      const Eigen::Index need =
          f.lag + ((f.kind == SignalKind::Phi1 || f.kind == SignalKind::Phi2) ? 1 : 0);
      s = std::max(s, need);
    }
  }
  return s;
}

namespace {

double eval_term(const Term& term, const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& p1, const Eigen::VectorXd& p2, Eigen::Index t) {
  double v = 1.0;
  for (const auto& f : term.factors()) {
    double x;
    switch (f.kind) {
      case SignalKind::Output: x = y[t - f.lag]; break;
      case SignalKind::Input: x = u[t - f.lag]; break;
      case SignalKind::Phi1: x = p1[t - f.lag]; break;
      default: x = p2[t - f.lag]; break;
    }
    double p = x;
    for (int e = 1; e < f.power; ++e) p *= x;
    v *= p;
  }
  return v;
}

}  // namespace

RegressionData build_regressor_matrix(const std::vector<Term>& pool,
                                      const Signal& u, const Signal& y) {
  if (u.size() != y.size()) throw ConfigError("u and y must have equal length");
  const Eigen::Index n = u.size();
  const Eigen::Index s = regression_start(pool);
  if (n <= s) {
    throw ConfigError("data of length " + std::to_string(n) +
                      " is too short for maximum lag (need > " + std::to_string(s) + ")");
  }
  auto [p1, p2] = compute_phi(u);
  RegressionData out;
  out.start = s;
  out.psi.resize(n - s, static_cast<Eigen::Index>(pool.size()));
  out.target.resize(n - s);
  for (Eigen::Index t = s; t < n; ++t) {
    for (size_t j = 0; j < pool.size(); ++j) {
      out.psi(t - s, static_cast<Eigen::Index>(j)) =
          eval_term(pool[j], y.samples, u.samples, p1.samples, p2.samples, t);
    }
    out.target[t - s] = y.samples[t];
  }
  return out;
}

Signal one_step_predict(const NarxModel& model, const Signal& u, const Signal& y) {
  if (u.size() != y.size()) throw ConfigError("u and y must have equal length");
  const Eigen::Index n = u.size();
  const Eigen::Index s = regression_start(model.terms);
  if (n <= s) throw ConfigError("data too short for one-step prediction");
  auto [p1, p2] = compute_phi(u);
  Eigen::VectorXd yhat(n);
  for (Eigen::Index t = 0; t < s; ++t) yhat[t] = y.samples[t];
  for (Eigen::Index t = s; t < n; ++t) {
    double acc = 0.0;
    for (size_t j = 0; j < model.terms.size(); ++j) {
      acc += model.theta[static_cast<Eigen::Index>(j)] *
             eval_term(model.terms[j], y.samples, u.samples, p1.samples, p2.samples, t);
    }
    yhat[t] = acc;
  }
  return Signal{yhat, u.sample_time};
}

Signal free_run(const NarxModel& model, const Signal& u, const Eigen::VectorXd& y0) {
  const Eigen::Index n = u.size();
  const Eigen::Index s = std::max<Eigen::Index>(regression_start(model.terms), y0.size());
  if (n <= s) throw ConfigError("input too short for free-run simulation");
  auto [p1, p2] = compute_phi(u);
  constexpr double kDivergenceLimit = 1e12;

  Eigen::VectorXd yhat(n);
  for (Eigen::Index t = 0; t < s; ++t) {
    yhat[t] = t < y0.size() ? y0[t] : (y0.size() > 0 ? y0[y0.size() - 1] : 0.0);
  }
  for (Eigen::Index t = s; t < n; ++t) {
    double acc = 0.0;
    for (size_t j = 0; j < model.terms.size(); ++j) {
      acc += model.theta[static_cast<Eigen::Index>(j)] *
             eval_term(model.terms[j], yhat, u.samples, p1.samples, p2.samples, t);
    }
    if (!std::isfinite(acc) || std::abs(acc) > kDivergenceLimit) {
      throw NumericError("free-run simulation diverged at index " + std::to_string(t));
    }
    yhat[t] = acc;
  }
  return Signal{yhat, u.sample_time};
}

}  // namespace hysid
