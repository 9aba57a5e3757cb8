#pragma once

#include "hysid/model.hpp"
#include "hysid/signal.hpp"
#include "hysid/term.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace hysid {

/// phi1[k] = u[k] - u[k-1], phi2[k] = sign(phi1[k]); index 0 is 0 for both.
std::pair<Signal, Signal> compute_phi(const Signal& u);

/// First time index at which every factor of every term can be evaluated.
/// Phi factors at lag l need index >= l + 1 because phi is undefined at 0.
Eigen::Index regression_start(const std::vector<Term>& terms);

/// Row t evaluates each term at time t; target[t] = y[t]. Rows run from
/// regression_start to the end of the data.
struct RegressionData {
  Eigen::MatrixXd psi;
  Eigen::VectorXd target;
  Eigen::Index start{0};  // time index of the first row
};

RegressionData build_regressor_matrix(const std::vector<Term>& pool,
                                      const Signal& u, const Signal& y);

/// One-step-ahead prediction from measured lags. Samples before the first
/// predictable index are copied from the measured output.
Signal one_step_predict(const NarxModel& model, const Signal& u, const Signal& y);

/// Free-run (simulation) mode: predicted outputs are fed back. y0 seeds the
/// first n_y output values; the last seed is held until all lags are valid.
/// Throws NumericError naming the index if |yhat| exceeds the divergence
/// threshold (1e12) or becomes non-finite.
Signal free_run(const NarxModel& model, const Signal& u, const Eigen::VectorXd& y0);

}  // namespace hysid
