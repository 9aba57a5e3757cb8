#pragma once

#include "hysid/term.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace hysid {

/// Polynomial NARX model: ordered term list with one parameter per term.
struct NarxModel {
  std::vector<Term> terms;
  Eigen::VectorXd theta;
  int n_y{1};        // maximum output lag
  int n_u{1};        // maximum input lag (phi lags included)
  int tau_d{1};      // pure input delay, >= 1
  int tau_s{0};      // causality shift used when identifying inverse models; 0 for direct
  double sample_time{1.0};

  /// Throws on inconsistent sizes, lags exceeding n_y/n_u, or tau_d < 1.
  void validate() const;

  /// n_y/n_u recomputed from the term list (phi lags count toward n_u).
  static NarxModel from_terms(std::vector<Term> terms, Eigen::VectorXd theta,
                              int tau_d, int tau_s, double sample_time);

  int term_index(const Term& t) const;  // -1 when absent
};

/// Text serialization; round-trips parameters to 17 significant digits.
void write_model(std::ostream& os, const NarxModel& model);
void write_model_file(const std::string& path, const NarxModel& model);
NarxModel read_model(std::istream& is);
NarxModel read_model_file(const std::string& path);

}  // namespace hysid
