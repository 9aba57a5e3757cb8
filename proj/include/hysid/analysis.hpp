#pragma once

#include "hysid/estimation.hpp"
#include "hysid/model.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

namespace hysid {

enum class SteadyStateClass { SingleFixedPoint, Continuum, Diverging };

std::string to_string(SteadyStateClass c);

struct SteadyStateReport {
  double sigma_y{0.0};  // sum of linear-output-term parameters
  SteadyStateClass classification{SteadyStateClass::SingleFixedPoint};
};

enum class Branch { Loading, Unloading };  // phi2 = +1 / -1

/// Quasi-static solution curve for one branch. Points where the affine solve
/// is singular carry NaN and defined = false.
struct QuasiStaticCurve {
  Branch branch{Branch::Loading};
  Eigen::VectorXd u_grid;
  Eigen::VectorXd y_tilde;
  std::vector<bool> attracting;
  std::vector<bool> defined;
  double phi1_value{0.0};  // magnitude of the slow increment used
};

/// Terms violating the structural assumption behind the steady-state and
/// quasi-static analyses (output powers, sign powers, pure output-input
/// cross products). Empty means compliant.
std::vector<Term> assumption_violations(const std::vector<Term>& structure);

/// Sum of parameters over terms that are a single power-1 output factor.
double sum_linear_output_params(const NarxModel& model);

/// S with ones at the linear-output-term positions, c = [1]; enforcing it
/// makes the steady-state relation an identity for every constant input.
/// Throws StructuralError when the structure has no linear output term.
EqualityConstraint build_continuum_constraint(const std::vector<Term>& structure);

/// Classifies the steady state from sigma_y. tol_eq defaults to 1e-9.
SteadyStateReport steady_state_analyze(const NarxModel& model, double tol_eq = 1e-9);

/// Spectral-radius test of the output-lag companion matrix evaluated at the
/// frozen quasi-static point. phi1 is the increment magnitude; its sign is
/// taken from the branch (positive for loading, negative for unloading).
/// Boundary spectral radius exactly 1 counts as not attracting.
bool attracting_test(const NarxModel& model, double u, double phi1, Branch branch);

/// Solves the quasi-static relation y~ = N(u)/(1 - a(u)) per grid point.
/// Requires the model to be affine in the common output value (guaranteed by
/// the structural exclusions); otherwise throws StructuralError.
QuasiStaticCurve quasi_static_solve(const NarxModel& model,
                                    const Eigen::VectorXd& u_grid, double phi1,
                                    Branch branch);

/// Delimited export: u, y_tilde, attracting, defined per row.
void write_curve(std::ostream& os, const QuasiStaticCurve& curve);

}  // namespace hysid
