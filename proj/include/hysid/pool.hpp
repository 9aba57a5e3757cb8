#pragma once

#include "hysid/term.hpp"

#include <vector>

namespace hysid {

/// Structural exclusion rules applied when generating the candidate pool.
/// The three rules remove regressors that break the steady-state and
/// quasi-static analyses:
///   (i)   output powers >= 2, alone or multiplied by phi factors only
///   (ii)  any phi2 factor raised to a power >= 2
///   (iii) pure output-input cross products with no phi factor
struct ExclusionRules {
  bool no_output_powers = true;
  bool no_sign_powers = true;
  bool no_output_input_cross = true;

  static ExclusionRules all() { return {}; }
  static ExclusionRules none() { return {false, false, false}; }

  bool excludes(const Term& t) const;
};

/// Every canonical term of total degree <= ell over lagged outputs
/// (lags 1..n_y), inputs and phi signals (lags 1..n_u), minus exclusions.
/// The constant term is included. Sorted canonically.
std::vector<Term> generate_term_pool(int ell, int n_y, int n_u,
                                     const ExclusionRules& rules);

/// Removes candidates that reference u(k-tau_d) other than through a single
/// linear factor, so that any selected structure keeps the delayed input
/// isolable for direct compensator synthesis.
std::vector<Term> filter_pool_for_direct_synthesis(std::vector<Term> pool, int tau_d);

}  // namespace hysid
