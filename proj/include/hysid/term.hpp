#pragma once

#include <string>
#include <vector>

namespace hysid {

/// Which lagged signal a factor refers to. For inverse-model datasets the
/// roles are relabeled (Output = estimated input channel, Input = shifted
/// plant output) but the machinery is identical.
enum class SignalKind { Output, Input, Phi1, Phi2 };

std::string to_string(SignalKind kind);

/// One factor of a regressor monomial: signal(k - lag) ^ power.
struct LaggedFactor {
  SignalKind kind{SignalKind::Output};
  int lag{1};
  int power{1};

  friend bool operator==(const LaggedFactor&, const LaggedFactor&) = default;
  friend auto operator<=>(const LaggedFactor&, const LaggedFactor&) = default;
};

/// A regressor: product of lagged factors. Empty factor list is the constant
/// term. Canonical form sorts factors by (kind, lag) and merges duplicates.
class Term {
 public:
  Term() = default;
  explicit Term(std::vector<LaggedFactor> factors);

  const std::vector<LaggedFactor>& factors() const { return factors_; }
  bool is_constant() const { return factors_.empty(); }

  int degree() const;
  int degree_of(SignalKind kind) const;
  /// True iff the term is a single power-1 factor of the given kind.
  bool is_single_linear(SignalKind kind) const;
  bool contains(SignalKind kind) const { return degree_of(kind) > 0; }
  int max_lag(SignalKind kind) const;
  int max_lag() const;

  /// "y(k-1)*phi1(k-2)^2", or "1" for the constant term.
  std::string str() const;
  /// Parses the str() format. Throws ConfigError on malformed input.
  static Term parse(const std::string& text);

  friend bool operator==(const Term&, const Term&) = default;
  /// Canonical order: by degree, then lexicographic factor comparison.
  friend bool operator<(const Term& a, const Term& b);

 private:
  std::vector<LaggedFactor> factors_;  // canonical: sorted, merged, powers >= 1
};

}  // namespace hysid
