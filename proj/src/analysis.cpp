#include "hysid/analysis.hpp"

#include "hysid/errors.hpp"
#include "hysid/pool.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace hysid {

std::string to_string(SteadyStateClass c) {
  switch (c) {
    case SteadyStateClass::SingleFixedPoint: return "single-fixed-point";
    case SteadyStateClass::Continuum: return "continuum";
    case SteadyStateClass::Diverging: return "diverging";
  }
  return "?";
}

std::vector<Term> assumption_violations(const std::vector<Term>& structure) {
  const ExclusionRules rules = ExclusionRules::all();
  std::vector<Term> bad;
  for (const auto& t : structure) {
    if (rules.excludes(t)) bad.push_back(t);
  }
  return bad;
}

double sum_linear_output_params(const NarxModel& model) {
  double s = 0.0;
  for (size_t i = 0; i < model.terms.size(); ++i) {
    if (model.terms[i].is_single_linear(SignalKind::Output)) {
      s += model.theta[static_cast<Eigen::Index>(i)];
    }
  }
  return s;
}

EqualityConstraint build_continuum_constraint(const std::vector<Term>& structure) {
  EqualityConstraint con;
  con.S = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(structure.size()));
  con.c = Eigen::VectorXd::Ones(1);
  bool found = false;
  for (size_t i = 0; i < structure.size(); ++i) {
    if (structure[i].is_single_linear(SignalKind::Output)) {
      con.S(0, static_cast<Eigen::Index>(i)) = 1.0;
      found = true;
    }
  }
  if (!found) {
    throw StructuralError(
        "structure has no linear output regressor; the continuum constraint does not apply");
  }
  return con;
}

SteadyStateReport steady_state_analyze(const NarxModel& model, double tol_eq) {
  const auto bad = assumption_violations(model.terms);
  if (!bad.empty()) {
    std::string msg = "model violates the structural assumption; offending terms:";
    for (const auto& t : bad) msg += " " + t.str();
    throw StructuralError(msg);
  }
  SteadyStateReport rep;
  rep.sigma_y = sum_linear_output_params(model);
  if (std::abs(rep.sigma_y - 1.0) <= tol_eq) {
    rep.classification = SteadyStateClass::Continuum;
  } else if (std::abs(rep.sigma_y) < 1.0) {
    rep.classification = SteadyStateClass::SingleFixedPoint;
  } else {
    rep.classification = SteadyStateClass::Diverging;
  }
  return rep;
}

namespace {

/// Product of a term's non-output factors evaluated at the frozen
/// quasi-static point: every input lag reads u, every phi1 lag reads phi1,
/// every phi2 lag reads phi2.
double frozen_nonoutput_product(const Term& term, double u, double phi1, double phi2) {
  double v = 1.0;
  for (const auto& f : term.factors()) {
    double x;
    switch (f.kind) {
      case SignalKind::Output: continue;
      case SignalKind::Input: x = u; break;
      case SignalKind::Phi1: x = phi1; break;
      default: x = phi2; break;
    }
    double p = x;
    for (int e = 1; e < f.power; ++e) p *= x;
    v *= p;
  }
  return v;
}

void require_affine(const NarxModel& model) {
  for (const auto& t : model.terms) {
    if (t.degree_of(SignalKind::Output) > 1) {
      throw StructuralError("model is not affine in the quasi-static output; offending term: " +
                            t.str());
    }
  }
}

void branch_values(double phi1_mag, Branch branch, double& phi1, double& phi2) {
  phi2 = branch == Branch::Loading ? 1.0 : -1.0;
  phi1 = branch == Branch::Loading ? std::abs(phi1_mag) : -std::abs(phi1_mag);
}

}  // namespace

bool attracting_test(const NarxModel& model, double u, double phi1_mag, Branch branch) {
  require_affine(model);
  double phi1, phi2;
  branch_values(phi1_mag, branch, phi1, phi2);

  // companion matrix of dF/d[y_{k-1} ... y_{k-n_y}]
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(model.n_y);
  for (size_t i = 0; i < model.terms.size(); ++i) {
    const Term& t = model.terms[i];
    for (const auto& f : t.factors()) {
      if (f.kind == SignalKind::Output) {
        coeff[f.lag - 1] += model.theta[static_cast<Eigen::Index>(i)] *
                            frozen_nonoutput_product(t, u, phi1, phi2);
      }
    }
  }
  if (model.n_y == 1) return std::abs(coeff[0]) < 1.0;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(model.n_y, model.n_y);
  companion.row(0) = coeff.transpose();
  for (int i = 1; i < model.n_y; ++i) companion(i, i - 1) = 1.0;
  const Eigen::VectorXcd eig = companion.eigenvalues();
  double rho = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) rho = std::max(rho, std::abs(eig[i]));
  return rho < 1.0;
}

QuasiStaticCurve quasi_static_solve(const NarxModel& model,
                                    const Eigen::VectorXd& u_grid, double phi1_mag,
                                    Branch branch) {
  require_affine(model);
  double phi1, phi2;
  branch_values(phi1_mag, branch, phi1, phi2);

  QuasiStaticCurve curve;
  curve.branch = branch;
  curve.u_grid = u_grid;
  curve.phi1_value = std::abs(phi1_mag);
  curve.y_tilde.resize(u_grid.size());
  curve.attracting.assign(static_cast<size_t>(u_grid.size()), false);
  curve.defined.assign(static_cast<size_t>(u_grid.size()), false);

  for (Eigen::Index i = 0; i < u_grid.size(); ++i) {
    const double u = u_grid[i];
    double constant = 0.0;  // N(u): terms without output factors
    double slope = 0.0;     // a(u): coefficient multiplying y~
    for (size_t j = 0; j < model.terms.size(); ++j) {
      const Term& t = model.terms[j];
      const double v =
          model.theta[static_cast<Eigen::Index>(j)] * frozen_nonoutput_product(t, u, phi1, phi2);
      if (t.degree_of(SignalKind::Output) == 0) {
        constant += v;
      } else {
        slope += v;
      }
    }
    const double den = 1.0 - slope;
    if (std::abs(den) < 1e-12) {
      curve.y_tilde[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    curve.y_tilde[i] = constant / den;
    curve.defined[static_cast<size_t>(i)] = true;
    curve.attracting[static_cast<size_t>(i)] = attracting_test(model, u, phi1_mag, branch);
  }
  return curve;
}

void write_curve(std::ostream& os, const QuasiStaticCurve& curve) {
  os << "u\ty_tilde\tattracting\tbranch\n";
  const char* branch = curve.branch == Branch::Loading ? "loading" : "unloading";
  char buf[80];
  for (Eigen::Index i = 0; i < curve.u_grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g\t%.17g", curve.u_grid[i], curve.y_tilde[i]);
    os << buf << "\t" << (curve.attracting[static_cast<size_t>(i)] ? 1 : 0) << "\t" << branch
       << "\n";
  }
}

}  // namespace hysid
