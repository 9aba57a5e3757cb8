#pragma once

#include "hysid/model.hpp"
#include "hysid/signal.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hysid {

/// Split of a direct model into linear output polynomial A(q), the isolated
/// delayed-input gain b_taud, the trailing input polynomial B*(q), and the
/// nonlinear-plus-constant remainder f. The verbatim term groups are kept so
/// the decomposition reassembles the original model exactly.
struct DirectDecomposition {
  Eigen::VectorXd a_coeffs;      // a_1..a_{n_y}; A(q) = 1 - sum a_j q^-j
  double b_taud{0.0};            // gain on u(k - tau_d) after expanding phi1
  Eigen::VectorXd bstar_coeffs;  // b_{tau_d+1}.. on the expanded input lags
  int bstar_first_lag{0};
  std::vector<std::pair<Term, double>> f_terms;         // nonlinear + constant
  std::vector<std::pair<Term, double>> linear_y_terms;  // verbatim A-group
  std::vector<std::pair<Term, double>> linear_u_terms;  // verbatim B-group
  int tau_d{1};

  /// Original model, reconstructed term-for-term.
  NarxModel reassemble(const NarxModel& like) const;
};

/// One factor of a compensator recurrence. `shift` is relative to the sample
/// being computed: m(k-1) has shift -1; r(k+1) has shift +1. Delta variables
/// are one-sample differences, Delta x(k+s) = x(k+s) - x(k+s-1).
enum class LawVar { M, R, DeltaM, SignDeltaM, DeltaR, SignDeltaR };

struct LawFactor {
  LawVar var{LawVar::R};
  int shift{0};
  int power{1};

  friend bool operator==(const LawFactor&, const LawFactor&) = default;
};

struct LawTerm {
  double coeff{0.0};
  std::vector<LawFactor> factors;
};

/// Executable feedforward recurrence. Direct laws keep the isolated gain as
/// an explicit divisor: m_k = (1/divisor) * sum(terms); Inverse laws use 1.
struct CompensatorLaw {
  enum class Kind { Direct, Inverse };
  Kind kind{Kind::Direct};
  double divisor{1.0};
  std::vector<LawTerm> terms;
  int horizon{0};     // future reference samples read per step
  int past_depth{0};  // past m samples needed before the first computable step
  double sample_time{1.0};
};

/// Checks the compensator-structure assumption (the only u(k-tau_d)
/// occurrence is a single linear regressor, n_u > tau_d) and splits the
/// model. Throws StructuralError on violations and when |b_taud| <= 1e-12.
DirectDecomposition decompose_direct(const NarxModel& model);

/// Algebraic rearrangement of the direct model: substitute the reference for
/// the output and the compensation signal for the input, advance one step,
/// and isolate the delayed input. Phi factors become differences/signs of m.
CompensatorLaw synthesize_direct(const NarxModel& model);

/// Builds the dataset for inverse-model identification: the regression input
/// channel is y advanced by tau_s samples, the target is u. Requires
/// tau_s >= tau_d + 1.
std::pair<Signal, Signal> shift_for_inverse(const Signal& u, const Signal& y, int tau_s,
                                            int tau_d = 1);

/// Direct substitution into the identified inverse model: output lags become
/// m, input lags become r shifted by tau_s, phi factors become differences/
/// signs of r. Requires at least one input-bearing regressor.
CompensatorLaw synthesize_inverse(const NarxModel& inverse_model);

/// Evaluates the recurrence along a reference. m0 seeds the past_depth
/// initial samples (empty = seeded with r[0]). The final `horizon` samples
/// are not computable and are truncated from the output.
Signal run_compensator(const CompensatorLaw& law, const Signal& r,
                       const Eigen::VectorXd& m0 = {});

/// Any map from plant input to plant output sampled at the same rate.
using PlantEvaluator = std::function<Signal(const Signal&)>;

struct ChainResult {
  Signal m;
  Signal y;
  double mape{0.0};
  double nsavi{0.0};
};

/// Composes the compensator with a plant and scores tracking accuracy and
/// effort over the samples after transient_skip.
ChainResult evaluate_chain(const CompensatorLaw& law, const PlantEvaluator& plant,
                           const Signal& r, Eigen::Index transient_skip = 0);

/// Moving quadratic-regression smoother (centered window, odd length) used
/// to mitigate the error-in-variables problem before inverse identification.
Signal smooth_quadratic(const Signal& y, int window);

std::string law_term_str(const LawTerm& term);

/// Text serialization, shared format family with models.
void write_law(std::ostream& os, const CompensatorLaw& law);
void write_law_file(const std::string& path, const CompensatorLaw& law);
CompensatorLaw read_law(std::istream& is);
CompensatorLaw read_law_file(const std::string& path);

}  // namespace hysid
