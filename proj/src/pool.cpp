#include "hysid/pool.hpp"

#include "hysid/errors.hpp"

#include <algorithm>
#include <utility>

namespace hysid {

bool ExclusionRules::excludes(const Term& t) const {
  const int yp = t.degree_of(SignalKind::Output);
  const int up = t.degree_of(SignalKind::Input);
  const int p1 = t.degree_of(SignalKind::Phi1);
  const int p2 = t.degree_of(SignalKind::Phi2);
  if (no_output_powers && yp >= 2 && up == 0) return true;
  if (no_sign_powers) {
    for (const auto& f : t.factors()) {
      if (f.kind == SignalKind::Phi2 && f.power >= 2) return true;
    }
  }
  if (no_output_input_cross && yp >= 1 && up >= 1 && p1 == 0 && p2 == 0) return true;
  return false;
}

namespace {

void enumerate(const std::vector<LaggedFactor>& alphabet, size_t start, int remaining,
               std::vector<LaggedFactor>& current, std::vector<Term>& out) {
  out.emplace_back(current);
  if (remaining == 0) return;
  for (size_t i = start; i < alphabet.size(); ++i) {
    current.push_back(alphabet[i]);
    enumerate(alphabet, i, remaining - 1, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Term> generate_term_pool(int ell, int n_y, int n_u, const ExclusionRules& rules) {
  if (ell < 1) throw ConfigError("pool degree ell must be >= 1");
  if (n_y < 1 || n_u < 1) throw ConfigError("pool lags n_y, n_u must be >= 1");

  std::vector<LaggedFactor> alphabet;
  for (int l = 1; l <= n_y; ++l) alphabet.push_back({SignalKind::Output, l, 1});
  for (int l = 1; l <= n_u; ++l) alphabet.push_back({SignalKind::Input, l, 1});
  for (int l = 1; l <= n_u; ++l) alphabet.push_back({SignalKind::Phi1, l, 1});
  for (int l = 1; l <= n_u; ++l) alphabet.push_back({SignalKind::Phi2, l, 1});

  std::vector<Term> all;
  std::vector<LaggedFactor> current;
  enumerate(alphabet, 0, ell, current, all);

  std::vector<Term> pool;
  for (auto& t : all) {
    if (!rules.excludes(t)) pool.push_back(std::move(t));
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

std::vector<Term> filter_pool_for_direct_synthesis(std::vector<Term> pool, int tau_d) {
  if (tau_d < 1) throw ConfigError("tau_d must be >= 1");
  std::vector<Term> out;
  for (auto& t : pool) {
    bool touches_taud = false;
    for (const auto& f : t.factors()) {
      if (f.lag == tau_d && (f.kind == SignalKind::Input || f.kind == SignalKind::Phi1 ||
                             f.kind == SignalKind::Phi2)) {
        touches_taud = true;
      }
    }
    if (!touches_taud || t.is_single_linear(SignalKind::Input) ||
        t.is_single_linear(SignalKind::Phi1)) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace hysid
