#pragma once

#include "hysid/model.hpp"
#include "hysid/signal.hpp"
#include "hysid/term.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace hysid::test {

inline Term T(const std::string& s) { return Term::parse(s); }

/// The six-term direct model structure identified for the actuator benchmark,
/// with the published constrained parameter values.
inline NarxModel benchmark_direct_model() {
  std::vector<Term> terms = {T("y(k-1)"),
                             T("phi1(k-1)"),
                             T("phi2(k-2)*phi1(k-2)*u(k-2)"),
                             T("phi2(k-2)*phi1(k-2)*y(k-1)"),
                             T("phi1(k-2)*u(k-2)^2"),
                             T("phi1(k-2)*u(k-2)*y(k-1)")};
  Eigen::VectorXd theta(6);
  theta << 1.00, 0.77, 1.44e-2, -9.60e-3, 3.15e-4, -2.47e-4;
  return NarxModel::from_terms(std::move(terms), std::move(theta), 1, 0, 1e-3);
}

/// The six-term inverse model structure with the published parameters. The
/// output channel is the estimated plant input; the input channel is the
/// plant output shifted by tau_s = 2.
inline NarxModel benchmark_inverse_model() {
  std::vector<Term> terms = {T("y(k-1)"),
                             T("phi1(k-1)"),
                             T("phi2(k-1)*phi1(k-1)*y(k-1)"),
                             T("phi2(k-1)*phi1(k-1)*u(k-1)"),
                             T("phi2(k-1)*u(k-1)*y(k-1)"),
                             T("phi2(k-1)*u(k-1)^2")};
  Eigen::VectorXd theta(6);
  theta << 1.00, 1.27, -2.13e-2, 1.37e-2, -1.07e-5, 7.99e-6;
  return NarxModel::from_terms(std::move(terms), std::move(theta), 1, 2, 1e-3);
}

/// Five-term analysis example: y_k = th1 y_{k-1} + th2 phi2_{k-1}
/// + th3 phi1_{k-1} u_{k-1} + th4 phi2_{k-1} phi1_{k-1} y_{k-1} + th5 phi1_{k-1}.
inline NarxModel example1_model(double th1, double th2, double th3, double th4, double th5) {
  std::vector<Term> terms = {T("y(k-1)"), T("phi2(k-1)"), T("phi1(k-1)*u(k-1)"),
                             T("phi2(k-1)*phi1(k-1)*y(k-1)"), T("phi1(k-1)")};
  Eigen::VectorXd theta(5);
  theta << th1, th2, th3, th4, th5;
  return NarxModel::from_terms(std::move(terms), std::move(theta), 1, 0, 1e-3);
}

inline Signal random_signal(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0,
                            double ts = 1e-3) {
  std::normal_distribution<double> d(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return Signal{v, ts};
}

/// Smooth band-limited test input: sum of a few low-frequency sinusoids.
inline Signal smooth_signal(std::mt19937_64& rng, Eigen::Index n, double amplitude,
                            double ts = 1e-3) {
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> fr(0.3, 3.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < 4; ++c) {
    const double f = fr(rng), p = ph(rng);
    for (Eigen::Index k = 0; k < n; ++k) {
      v[k] += std::sin(2.0 * M_PI * f * static_cast<double>(k) * ts + p);
    }
  }
  v *= amplitude / v.cwiseAbs().maxCoeff();
  return Signal{v, ts};
}

/// Brute-force forward-selection oracle, independent of the production
/// implementation: the ERR of candidate j at each step is computed from the
/// gain in projection energy when column j joins the selected set, using a
/// fresh QR factorization per candidate.
struct ReferenceSelection {
  std::vector<int> order;
  std::vector<double> errs;
};

inline ReferenceSelection reference_frols(const Eigen::MatrixXd& psi,
                                          const Eigen::VectorXd& y, int max_terms) {
  const Eigen::Index m = psi.cols();
  const double yty = y.squaredNorm();
  ReferenceSelection out;
  std::vector<int> selected;
  double explained_prev = 0.0;
  for (int step = 0; step < max_terms && step < m; ++step) {
    int best = -1;
    double best_err = -1.0;
    for (int j = 0; j < m; ++j) {
      if (std::find(selected.begin(), selected.end(), j) != selected.end()) continue;
      Eigen::MatrixXd W(psi.rows(), selected.size() + 1);
      for (size_t i = 0; i < selected.size(); ++i) W.col(i) = psi.col(selected[i]);
      W.col(selected.size()) = psi.col(j);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
      const Eigen::VectorXd coeffs = qr.solve(y);
      const double explained = yty - (y - W * coeffs).squaredNorm();
      const double err = (explained - explained_prev) / yty;
      if (err > best_err + 1e-14 * std::abs(best_err)) {
        best = j;
        best_err = err;
      }
    }
    if (best < 0 || best_err <= 1e-14) break;
    selected.push_back(best);
    explained_prev += best_err * yty;
    out.order.push_back(best);
    out.errs.push_back(best_err);
  }
  return out;
}

}  // namespace hysid::test
