#include "hysid/estimation.hpp"

#include "hysid/errors.hpp"
#include "hysid/regression.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace hysid {

namespace {

constexpr double kConditionWarn = 1e12;

struct QrFactors {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  double condition{0.0};
};

QrFactors factor_checked(const Eigen::Ref<const Eigen::MatrixXd>& psi) {
  if (psi.rows() < psi.cols()) {
    throw NumericError("least squares needs at least as many rows as columns");
  }
  QrFactors f{Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(psi), 0.0};
  const auto& R = f.qr.matrixR();
  const Eigen::Index nc = psi.cols();
  const double rmax = std::abs(R(0, 0));
  const double rmin = std::abs(R(nc - 1, nc - 1));
  if (f.qr.rank() < nc || rmin == 0.0) {
    // pivoting pushes dependent columns to the back of the permutation
    std::ostringstream msg;
    msg << "rank-deficient regressor matrix (rank " << f.qr.rank() << " of " << nc
        << "); dependent columns:";
    const auto perm = f.qr.colsPermutation().indices();
    for (Eigen::Index i = f.qr.rank(); i < nc; ++i) msg << " " << perm[i];
    throw NumericError(msg.str());
  }
  f.condition = rmax / rmin;
  return f;
}

/// (Psi'Psi)^-1 x = P R^-1 R^-T P' x using the pivoted QR of Psi.
Eigen::MatrixXd normal_inverse_apply(const QrFactors& f, const Eigen::MatrixXd& x) {
  const Eigen::Index nc = f.qr.matrixQR().cols();
  const auto R = f.qr.matrixR().topLeftCorner(nc, nc).template triangularView<Eigen::Upper>();
  const auto& P = f.qr.colsPermutation();
  Eigen::MatrixXd t = P.transpose() * x;
  t = R.transpose().solve(t);
  t = R.solve(t);
  return P * t;
}

}  // namespace

LeastSquaresResult least_squares(const Eigen::Ref<const Eigen::MatrixXd>& psi,
                                 const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (psi.rows() != y.size()) throw ConfigError("regressor/target row mismatch");
  QrFactors f = factor_checked(psi);
  LeastSquaresResult out;
  out.theta = f.qr.solve(y);
  out.condition = f.condition;
  if (f.condition > kConditionWarn) {
    out.warnings.push_back("condition estimate " + std::to_string(f.condition) +
                           " exceeds 1e12; parameters may be poorly determined");
  }
  return out;
}

LeastSquaresResult constrained_least_squares(const Eigen::Ref<const Eigen::MatrixXd>& psi,
                                             const Eigen::Ref<const Eigen::VectorXd>& y,
                                             const EqualityConstraint& con) {
  const Eigen::Index nc = psi.cols();
  if (con.S.cols() != nc) throw ConfigError("constraint S has wrong column count");
  if (con.S.rows() != con.c.size()) throw ConfigError("constraint S/c row mismatch");
  if (con.S.rows() == 0) return least_squares(psi, y);
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> sqr(con.S.transpose());
    if (sqr.rank() < con.S.rows()) throw NumericError("constraint matrix S is row rank deficient");
  }

  QrFactors f = factor_checked(psi);
  LeastSquaresResult out;
  out.theta = f.qr.solve(y);
  out.condition = f.condition;
  if (f.condition > kConditionWarn) {
    out.warnings.push_back("condition estimate " + std::to_string(f.condition) +
                           " exceeds 1e12; parameters may be poorly determined");
  }

  const Eigen::MatrixXd G = normal_inverse_apply(f, con.S.transpose());  // (Psi'Psi)^-1 S'
  const Eigen::MatrixXd M = con.S * G;                                   // S (Psi'Psi)^-1 S'
  Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
  if (ldlt.info() != Eigen::Success) {
    throw NumericError("S (Psi'Psi)^-1 S' is singular; constraint cannot be applied");
  }
  const Eigen::VectorXd lambda = ldlt.solve(con.S * out.theta - con.c);
  out.theta -= G * lambda;

  // land the constraint residual at round-off regardless of conditioning
  const Eigen::VectorXd resid = con.S * out.theta - con.c;
  if (resid.lpNorm<Eigen::Infinity>() > 0.0) {
    Eigen::LLT<Eigen::MatrixXd> sst((con.S * con.S.transpose()).eval());
    out.theta -= con.S.transpose() * sst.solve(resid);
  }
  return out;
}

SelectionReport frols_select(const std::vector<Term>& pool, const Signal& u,
                             const Signal& y, int max_terms,
                             const std::vector<Term>& forced) {
  if (pool.empty()) throw ConfigError("candidate pool is empty");
  if (max_terms < 1) throw ConfigError("max_terms must be >= 1");

  RegressionData data = build_regressor_matrix(pool, u, y);
  const Eigen::Index n = data.psi.rows();
  const Eigen::Index m = data.psi.cols();
  const double yty = data.target.squaredNorm();
  if (yty == 0.0) throw NumericError("target signal has zero energy");

  SelectionReport report;
  report.n_rows = n;
  report.target_energy = yty;

  Eigen::MatrixXd q = data.psi;  // working copy, deflated in place
  const Eigen::VectorXd col_energy0 = q.colwise().squaredNorm();
  std::vector<bool> used(static_cast<size_t>(m), false);
  std::vector<bool> noted(static_cast<size_t>(m), false);
  double cum = 0.0;

  auto is_degenerate = [&](Eigen::Index j, double ww) {
    if (ww > 1e-28 * col_energy0[j] && ww > 0.0) return false;
    if (!noted[static_cast<size_t>(j)]) {
      noted[static_cast<size_t>(j)] = true;
      report.notes.push_back("candidate " + pool[static_cast<size_t>(j)].str() +
                             " skipped (degenerate orthogonalized norm)");
    }
    return true;
  };

  auto select_column = [&](Eigen::Index j, double err) {
    const Eigen::VectorXd w = q.col(j);
    const double ww = w.squaredNorm();
    cum += err;
    report.selected.push_back({pool[static_cast<size_t>(j)], err, cum});
    used[static_cast<size_t>(j)] = true;
    const Eigen::RowVectorXd proj = (w.transpose() * q) / ww;
    q.noalias() -= w * proj;
  };

  for (const auto& ft : forced) {
    auto it = std::find(pool.begin(), pool.end(), ft);
    if (it == pool.end()) {
      throw ConfigError("forced term '" + ft.str() + "' is not in the candidate pool");
    }
    const Eigen::Index j = static_cast<Eigen::Index>(it - pool.begin());
    if (used[static_cast<size_t>(j)]) continue;
    const double ww = q.col(j).squaredNorm();
    if (ww <= 1e-28 * col_energy0[j]) {
      throw NumericError("forced term '" + ft.str() + "' is degenerate on this data");
    }
    const double g = q.col(j).dot(data.target) / ww;
    select_column(j, g * g * ww / yty);
    if (static_cast<int>(report.selected.size()) >= max_terms) break;
  }

  while (static_cast<int>(report.selected.size()) < max_terms) {
    Eigen::Index best = -1;
    double best_err = -1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      const double ww = q.col(j).squaredNorm();
      if (is_degenerate(j, ww)) continue;
      const double g = q.col(j).dot(data.target) / ww;
      const double err = g * g * ww / yty;
      if (err > best_err) {
        best = j;
        best_err = err;
      } else if (err == best_err && best >= 0) {
        const Term& a = pool[static_cast<size_t>(j)];
        const Term& b = pool[static_cast<size_t>(best)];
        if (a.degree() < b.degree() || (a.degree() == b.degree() && a < b)) best = j;
      }
    }
    if (best < 0) {
      report.notes.push_back("candidate pool exhausted after " +
                             std::to_string(report.selected.size()) +
                             " terms (remaining candidates degenerate)");
      break;
    }
    select_column(best, best_err);
  }

  // AIC over the nested models: sigma^2(n) = (1 - cumERR(n)) y'y / N
  report.aic.reserve(report.selected.size());
  for (size_t i = 0; i < report.selected.size(); ++i) {
    const double rem = std::max(1.0 - report.selected[i].cum_err, 1e-300);
    const double sigma2 = rem * yty / static_cast<double>(n);
    report.aic.push_back(static_cast<double>(n) * std::log(sigma2) +
                         2.0 * static_cast<double>(i + 1));
  }
  return report;
}

int aic_choose_size(SelectionReport& report) {
  if (report.selected.empty()) throw ConfigError("selection report is empty");
  int best = 1;
  for (size_t i = 1; i < report.aic.size(); ++i) {
    if (report.aic[i] < report.aic[static_cast<size_t>(best - 1)]) best = static_cast<int>(i + 1);
  }
  if (best == static_cast<int>(report.aic.size()) && report.aic.size() > 1) {
    bool strictly_decreasing = true;
    for (size_t i = 1; i < report.aic.size(); ++i) {
      if (report.aic[i] >= report.aic[i - 1]) {
        strictly_decreasing = false;
        break;
      }
    }
    if (strictly_decreasing) {
      report.notes.push_back(
          "AIC is strictly decreasing through the maximum size; returning the maximum");
    }
  }
  report.chosen_size = best;
  return best;
}

void write_selection_report(std::ostream& os, const SelectionReport& report) {
  os << "term\terr\tcum_err\taic\n";
  char buf[128];
  for (size_t i = 0; i < report.selected.size(); ++i) {
    const auto& s = report.selected[i];
    std::snprintf(buf, sizeof(buf), "%.17g\t%.17g\t%.17g", s.err, s.cum_err, report.aic[i]);
    os << s.term.str() << "\t" << buf << "\n";
  }
  os << "# chosen_size " << report.chosen_size << "\n";
  for (const auto& note : report.notes) os << "# note " << note << "\n";
}

}  // namespace hysid
