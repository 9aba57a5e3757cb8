#include "hysid/term.hpp"

#include "hysid/errors.hpp"

#include <algorithm>
#include <utility>

namespace hysid {

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::Output: return "y";
    case SignalKind::Input: return "u";
    case SignalKind::Phi1: return "phi1";
    case SignalKind::Phi2: return "phi2";
  }
  return "?";
}

Term::Term(std::vector<LaggedFactor> factors) : factors_(std::move(factors)) {
  for (const auto& f : factors_) {
    if (f.power < 1) throw ConfigError("factor power must be >= 1 in term");
    if (f.lag < 0) throw ConfigError("factor lag must be >= 0 in term");
    if (f.kind == SignalKind::Output && f.lag < 1) {
      throw ConfigError("output factors must have lag >= 1 (no current-output regressor)");
    }
  }
  std::sort(factors_.begin(), factors_.end(),
            [](const LaggedFactor& a, const LaggedFactor& b) {
              return std::tie(a.kind, a.lag) < std::tie(b.kind, b.lag);
            });
  // merge duplicate (kind, lag) pairs
  std::vector<LaggedFactor> merged;
  for (const auto& f : factors_) {
    if (!merged.empty() && merged.back().kind == f.kind && merged.back().lag == f.lag) {
      merged.back().power += f.power;
    } else {
      merged.push_back(f);
    }
  }
  factors_ = std::move(merged);
}

int Term::degree() const {
  int d = 0;
  for (const auto& f : factors_) d += f.power;
  return d;
}

int Term::degree_of(SignalKind kind) const {
  int d = 0;
  for (const auto& f : factors_) {
    if (f.kind == kind) d += f.power;
  }
  return d;
}

bool Term::is_single_linear(SignalKind kind) const {
  return factors_.size() == 1 && factors_[0].kind == kind && factors_[0].power == 1;
}

int Term::max_lag(SignalKind kind) const {
  int m = 0;
  for (const auto& f : factors_) {
    if (f.kind == kind) m = std::max(m, f.lag);
  }
  return m;
}

int Term::max_lag() const {
  int m = 0;
  for (const auto& f : factors_) m = std::max(m, f.lag);
  return m;
}

std::string Term::str() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out += "*";
    out += to_string(f.kind);
    out += f.lag == 0 ? "(k)" : "(k-" + std::to_string(f.lag) + ")";
    if (f.power > 1) out += "^" + std::to_string(f.power);
  }
  return out;
}

namespace {

LaggedFactor parse_factor(const std::string& tok) {
  const auto open = tok.find('(');
  const auto close = tok.find(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw ConfigError("malformed term factor '" + tok + "'");
  }
  const std::string name = tok.substr(0, open);
  SignalKind kind;
  if (name == "y") kind = SignalKind::Output;
  else if (name == "u") kind = SignalKind::Input;
  else if (name == "phi1") kind = SignalKind::Phi1;
  else if (name == "phi2") kind = SignalKind::Phi2;
  else throw ConfigError("unknown signal name '" + name + "' in term factor '" + tok + "'");

  const std::string idx = tok.substr(open + 1, close - open - 1);
  int lag = 0;
  if (idx == "k") {
    lag = 0;
  } else if (idx.rfind("k-", 0) == 0) {
    try {
      lag = std::stoi(idx.substr(2));
    } catch (const std::exception&) {
      throw ConfigError("malformed lag in term factor '" + tok + "'");
    }
  } else {
    throw ConfigError("malformed index '" + idx + "' in term factor '" + tok + "'");
  }

  int power = 1;
  if (close + 1 < tok.size()) {
    if (tok[close + 1] != '^') throw ConfigError("malformed term factor '" + tok + "'");
    try {
      power = std::stoi(tok.substr(close + 2));
    } catch (const std::exception&) {
      throw ConfigError("malformed power in term factor '" + tok + "'");
    }
  }
  return LaggedFactor{kind, lag, power};
}

}  // namespace

Term Term::parse(const std::string& text) {
  if (text == "1") return Term{};
  std::vector<LaggedFactor> factors;
  std::string tok;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '*') {
      if (tok.empty()) throw ConfigError("empty factor in term '" + text + "'");
      factors.push_back(parse_factor(tok));
      tok.clear();
    } else if (!std::isspace(static_cast<unsigned char>(text[i]))) {
      tok += text[i];
    }
  }
  return Term{std::move(factors)};
}

bool operator<(const Term& a, const Term& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.factors_ < b.factors_;
}

}  // namespace hysid
