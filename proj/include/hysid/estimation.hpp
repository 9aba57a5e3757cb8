#pragma once

#include "hysid/signal.hpp"
#include "hysid/term.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace hysid {

/// Linear equality constraints c = S * theta.
struct EqualityConstraint {
  Eigen::MatrixXd S;  // n_c x n_theta, full row rank
  Eigen::VectorXd c;  // n_c
};

struct LeastSquaresResult {
  Eigen::VectorXd theta;
  double condition{0.0};  // estimate from the R diagonal of the pivoted QR
  std::vector<std::string> warnings;
};

/// Minimizes ||y - Psi theta||_2 through a column-pivoted Householder QR.
/// Rank deficiency raises NumericError naming the dependent columns; a
/// condition estimate above 1e12 attaches a warning instead.
LeastSquaresResult least_squares(const Eigen::Ref<const Eigen::MatrixXd>& psi,
                                 const Eigen::Ref<const Eigen::VectorXd>& y);

/// Equality-constrained least squares,
///   theta_cls = theta_ls - (Psi'Psi)^-1 S' [S (Psi'Psi)^-1 S']^-1 (S theta_ls - c),
/// with (Psi'Psi)^-1 applied through triangular solves on the QR factor.
/// The returned estimate satisfies ||S theta - c||_inf <= 1e-10.
LeastSquaresResult constrained_least_squares(const Eigen::Ref<const Eigen::MatrixXd>& psi,
                                             const Eigen::Ref<const Eigen::VectorXd>& y,
                                             const EqualityConstraint& con);

struct SelectedTerm {
  Term term;
  double err{0.0};      // error reduction ratio of this selection step
  double cum_err{0.0};  // cumulative ERR up to and including this step
};

struct SelectionReport {
  std::vector<SelectedTerm> selected;
  std::vector<double> aic;  // aic[i] corresponds to the nested model of size i+1
  int chosen_size{0};       // filled by aic_choose_size
  std::vector<std::string> notes;
  Eigen::Index n_rows{0};
  double target_energy{0.0};  // y'y over the regression rows
};

/// Forward regression with orthogonal least squares, ranking candidates by
/// ERR = g^2 (w'w) / (y'y). Terms listed in `forced` are selected first, in
/// order, before the data-driven ranking continues; this is how structural
/// requirements (e.g. a linear delayed-input regressor for compensator
/// synthesis) are imposed on the search. Exact ERR ties break toward lower
/// degree, then canonical term order. Candidates whose orthogonalized norm
/// vanishes are skipped with a note.
SelectionReport frols_select(const std::vector<Term>& pool, const Signal& u,
                             const Signal& y, int max_terms,
                             const std::vector<Term>& forced = {});

/// Size minimizing AIC(n) = N ln(sigma_xi^2(n)) + 2n over the nested models
/// of the report. A strictly decreasing AIC returns the maximum size and
/// appends a warning note to the report.
int aic_choose_size(SelectionReport& report);

/// Delimited table: term, ERR, cumulative ERR, AIC.
void write_selection_report(std::ostream& os, const SelectionReport& report);

}  // namespace hysid
