#include "hysid/compensator.hpp"

#include "hysid/errors.hpp"
#include "hysid/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace hysid {

namespace {

constexpr double kGainFloor = 1e-12;

}  // namespace

DirectDecomposition decompose_direct(const NarxModel& model) {
  model.validate();
  const int tau_d = model.tau_d;
  if (model.n_u <= tau_d) {
    throw StructuralError("compensator synthesis requires n_u > tau_d (got n_u = " +
                          std::to_string(model.n_u) + ", tau_d = " + std::to_string(tau_d) + ")");
  }

  DirectDecomposition deco;
  deco.tau_d = tau_d;
  deco.a_coeffs = Eigen::VectorXd::Zero(model.n_y);
  deco.bstar_first_lag = tau_d + 1;
  // expanded input lags can reach n_u + 1 through phi1 differences
  Eigen::VectorXd b = Eigen::VectorXd::Zero(model.n_u + 2);

  for (size_t i = 0; i < model.terms.size(); ++i) {
    const Term& t = model.terms[i];
    const double th = model.theta[static_cast<Eigen::Index>(i)];
    if (t.is_single_linear(SignalKind::Output)) {
      deco.a_coeffs[t.factors()[0].lag - 1] += th;
      deco.linear_y_terms.emplace_back(t, th);
      continue;
    }
    const bool single_u = t.is_single_linear(SignalKind::Input);
    const bool single_p1 = t.is_single_linear(SignalKind::Phi1);
    if (single_u || single_p1) {
      const int lag = t.factors()[0].lag;
      if (lag < tau_d) {
        throw StructuralError("term " + t.str() + " references input newer than tau_d = " +
                              std::to_string(tau_d));
      }
      b[lag] += th;
      if (single_p1) b[lag + 1] -= th;
      deco.linear_u_terms.emplace_back(t, th);
      continue;
    }
    // everything else must stay clear of u(k - tau_d) and anything newer
    for (const auto& f : t.factors()) {
      if (f.kind == SignalKind::Output) continue;
      if (f.lag <= tau_d) {
        throw StructuralError("term " + t.str() +
                              " involves u(k-" + std::to_string(tau_d) +
                              ") through a nonlinear regressor; the delayed input "
                              "cannot be isolated");
      }
    }
    deco.f_terms.emplace_back(t, th);
  }

  deco.b_taud = b[tau_d];
  if (std::abs(deco.b_taud) <= kGainFloor) {
    throw StructuralError("compensation law undefined: the model has no linear u(k-" +
                          std::to_string(tau_d) + ") regressor (b_taud = 0)");
  }
  deco.bstar_coeffs = b.segment(tau_d + 1, b.size() - tau_d - 1);
  return deco;
}

NarxModel DirectDecomposition::reassemble(const NarxModel& like) const {
  std::vector<Term> terms;
  std::vector<double> theta;
  for (const auto& group : {linear_y_terms, linear_u_terms, f_terms}) {
    for (const auto& [t, th] : group) {
      terms.push_back(t);
      theta.push_back(th);
    }
  }
  Eigen::VectorXd tv = Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                         static_cast<Eigen::Index>(theta.size()));
  return NarxModel::from_terms(std::move(terms), std::move(tv), like.tau_d, like.tau_s,
                               like.sample_time);
}

namespace {

std::vector<LawFactor> map_direct_factors(const Term& t) {
  std::vector<LawFactor> out;
  for (const auto& f : t.factors()) {
    LawFactor lf;
    lf.power = f.power;
    lf.shift = 1 - f.lag;  // written one step ahead: k -> k+1
    switch (f.kind) {
      case SignalKind::Output: lf.var = LawVar::R; break;
      case SignalKind::Input: lf.var = LawVar::M; break;
      case SignalKind::Phi1: lf.var = LawVar::DeltaM; break;
      default: lf.var = LawVar::SignDeltaM; break;
    }
    out.push_back(lf);
  }
  return out;
}

bool references_m(const LawFactor& f) {
  return f.var == LawVar::M || f.var == LawVar::DeltaM || f.var == LawVar::SignDeltaM;
}

bool references_r(const LawFactor& f) {
  return f.var == LawVar::R || f.var == LawVar::DeltaR || f.var == LawVar::SignDeltaR;
}

void finalize_law(CompensatorLaw& law) {
  int horizon = 0, past = 0;
  for (const auto& term : law.terms) {
    for (const auto& f : term.factors) {
      if (references_m(f)) {
        const int newest = f.shift;
        if (newest > -1) {
          throw StructuralError("law term " + law_term_str(term) +
                                " references a compensation sample that is not yet computed");
        }
        const int oldest = f.var == LawVar::M ? -f.shift : -f.shift + 1;
        past = std::max(past, oldest);
      } else {
        horizon = std::max(horizon, f.shift);
      }
    }
  }
  law.horizon = horizon;
  law.past_depth = past;
}

}  // namespace

CompensatorLaw synthesize_direct(const NarxModel& model) {
  const DirectDecomposition deco = decompose_direct(model);
  const int tau_d = model.tau_d;

  CompensatorLaw law;
  law.kind = CompensatorLaw::Kind::Direct;
  law.sample_time = model.sample_time;
  law.divisor = deco.b_taud;

  // bracket of the rearranged relation, in the frame of the computed sample
  const int reindex = tau_d - 1;  // unknown m_{k-tau_d+1} becomes m at shift 0
  auto add = [&](double coeff, std::vector<LawFactor> factors) {
    for (auto& f : factors) f.shift += reindex;
    law.terms.push_back({coeff, std::move(factors)});
  };

  add(1.0, {LawFactor{LawVar::R, 1, 1}});
  for (size_t i = 0; i < model.terms.size(); ++i) {
    const Term& t = model.terms[i];
    const double th = model.theta[static_cast<Eigen::Index>(i)];
    if (t.is_single_linear(SignalKind::Input) && t.factors()[0].lag == tau_d) {
      continue;  // absorbed into the divisor
    }
    if (t.is_single_linear(SignalKind::Phi1) && t.factors()[0].lag == tau_d) {
      // theta * (m_{k+1-tau_d} - m_{k-tau_d}): unknown into the divisor,
      // the older sample stays in the bracket with a positive sign
      add(th, {LawFactor{LawVar::M, -tau_d, 1}});
      continue;
    }
    add(-th, map_direct_factors(t));
  }
  finalize_law(law);
  return law;
}

std::pair<Signal, Signal> shift_for_inverse(const Signal& u, const Signal& y, int tau_s,
                                            int tau_d) {
  if (u.size() != y.size()) throw ConfigError("u and y must have equal length");
  if (tau_s < tau_d + 1) {
    throw StructuralError("causality requires tau_s >= tau_d + 1 (got tau_s = " +
                          std::to_string(tau_s) + ", tau_d = " + std::to_string(tau_d) + ")");
  }
  const Eigen::Index n = u.size() - tau_s;
  if (n < 2) throw ConfigError("data too short for the causality shift");
  Signal input{Eigen::VectorXd(y.samples.segment(tau_s, n)), y.sample_time};
  Signal target{Eigen::VectorXd(u.samples.head(n)), u.sample_time};
  return {std::move(input), std::move(target)};
}

CompensatorLaw synthesize_inverse(const NarxModel& inverse_model) {
  inverse_model.validate();
  const int tau_s = inverse_model.tau_s;
  if (tau_s < inverse_model.tau_d + 1) {
    throw StructuralError("inverse model must carry tau_s >= tau_d + 1 (got tau_s = " +
                          std::to_string(tau_s) + ")");
  }
  bool has_input_regressor = false;
  for (const auto& t : inverse_model.terms) {
    if (t.contains(SignalKind::Input) || t.contains(SignalKind::Phi1) ||
        t.contains(SignalKind::Phi2)) {
      has_input_regressor = true;
      break;
    }
  }
  if (!has_input_regressor) {
    throw StructuralError(
        "inverse model has no regressor of the system output; the compensation law would "
        "ignore the reference");
  }

  CompensatorLaw law;
  law.kind = CompensatorLaw::Kind::Inverse;
  law.sample_time = inverse_model.sample_time;
  law.divisor = 1.0;
  for (size_t i = 0; i < inverse_model.terms.size(); ++i) {
    const Term& t = inverse_model.terms[i];
    LawTerm lt;
    lt.coeff = inverse_model.theta[static_cast<Eigen::Index>(i)];
    for (const auto& f : t.factors()) {
      LawFactor lf;
      lf.power = f.power;
      switch (f.kind) {
        case SignalKind::Output:
          lf.var = LawVar::M;
          lf.shift = -f.lag;
          break;
        case SignalKind::Input:
          lf.var = LawVar::R;
          lf.shift = tau_s - f.lag;
          break;
        case SignalKind::Phi1:
          lf.var = LawVar::DeltaR;
          lf.shift = tau_s - f.lag;
          break;
        default:
          lf.var = LawVar::SignDeltaR;
          lf.shift = tau_s - f.lag;
          break;
      }
      lt.factors.push_back(lf);
    }
    law.terms.push_back(std::move(lt));
  }
  finalize_law(law);
  return law;
}

namespace {

double eval_factor(const LawFactor& f, const Eigen::VectorXd& m, const Eigen::VectorXd& r,
                   Eigen::Index j) {
  double x;
  switch (f.var) {
    case LawVar::M: x = m[j + f.shift]; break;
    case LawVar::R: x = r[j + f.shift]; break;
    case LawVar::DeltaM: x = m[j + f.shift] - m[j + f.shift - 1]; break;
    case LawVar::SignDeltaM: x = sign3(m[j + f.shift] - m[j + f.shift - 1]); break;
    case LawVar::DeltaR: x = r[j + f.shift] - r[j + f.shift - 1]; break;
    default: x = sign3(r[j + f.shift] - r[j + f.shift - 1]); break;
  }
  double p = x;
  for (int e = 1; e < f.power; ++e) p *= x;
  return p;
}

}  // namespace

Signal run_compensator(const CompensatorLaw& law, const Signal& r, const Eigen::VectorXd& m0) {
  if (std::abs(law.divisor) <= kGainFloor) throw NumericError("law divisor is zero");
  const Eigen::Index n = r.size();

  Eigen::Index r_past = 0;
  for (const auto& term : law.terms) {
    for (const auto& f : term.factors) {
      if (references_r(f)) {
        const int oldest = f.var == LawVar::R ? f.shift : f.shift - 1;
        r_past = std::max<Eigen::Index>(r_past, -std::min(0, oldest));
      }
    }
  }
  const Eigen::Index j0 = std::max<Eigen::Index>(law.past_depth, r_past);
  const Eigen::Index last = n - 1 - law.horizon;
  if (last < j0) {
    throw ConfigError("reference of length " + std::to_string(n) +
                      " is too short for the law horizon " + std::to_string(law.horizon));
  }

  Eigen::VectorXd m(n - law.horizon);
  const double seed = n > 0 ? r[0] : 0.0;
  for (Eigen::Index j = 0; j < j0; ++j) m[j] = seed;
  if (m0.size() > 0) {
    if (m0.size() != law.past_depth) {
      throw ConfigError("m0 must supply exactly past_depth = " +
                        std::to_string(law.past_depth) + " seed samples");
    }
    for (Eigen::Index i = 0; i < m0.size(); ++i) m[j0 - m0.size() + i] = m0[i];
    for (Eigen::Index j = 0; j < j0 - m0.size(); ++j) m[j] = m0[0];
  }

  for (Eigen::Index j = j0; j <= last; ++j) {
    double acc = 0.0;
    for (const auto& term : law.terms) {
      double v = term.coeff;
      for (const auto& f : term.factors) v *= eval_factor(f, m, r.samples, j);
      acc += v;
    }
    acc /= law.divisor;
    if (!std::isfinite(acc)) {
      throw NumericError("compensator recurrence diverged at index " + std::to_string(j));
    }
    m[j] = acc;
  }
  return Signal{m, r.sample_time};
}

ChainResult evaluate_chain(const CompensatorLaw& law, const PlantEvaluator& plant,
                           const Signal& r, Eigen::Index transient_skip) {
  ChainResult out;
  out.m = run_compensator(law, r);
  out.y = plant(out.m);
  const Eigen::Index L = std::min({out.m.size(), out.y.size(), r.size()});
  const Signal r_al{Eigen::VectorXd(r.samples.head(L)), r.sample_time};
  const Signal y_al{Eigen::VectorXd(out.y.samples.head(L)), out.y.sample_time};
  const Signal m_al{Eigen::VectorXd(out.m.samples.head(L)), out.m.sample_time};
  out.mape = mape(r_al, y_al, transient_skip);
  out.nsavi = nsavi(m_al, r_al, transient_skip);
  return out;
}

Signal smooth_quadratic(const Signal& y, int window) {
  if (window == 0) return y;
  if (window < 5 || window % 2 == 0) {
    throw ConfigError("smoothing window must be odd and >= 5 (or 0 to disable)");
  }
  const Eigen::Index n = y.size();
  const Eigen::Index h = window / 2;
  Eigen::VectorXd out(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, t - h);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, t + h);
    const Eigen::Index w = hi - lo + 1;
    Eigen::MatrixXd X(w, 3);
    Eigen::VectorXd b(w);
    for (Eigen::Index i = 0; i < w; ++i) {
      const double dx = static_cast<double>(lo + i - t);
      X(i, 0) = 1.0;
      X(i, 1) = dx;
      X(i, 2) = dx * dx;
      b[i] = y[lo + i];
    }
    out[t] = X.householderQr().solve(b)[0];
  }
  return Signal{out, y.sample_time};
}

namespace {

std::string law_var_name(LawVar v) {
  switch (v) {
    case LawVar::M: return "m";
    case LawVar::R: return "r";
    case LawVar::DeltaM: return "dm";
    case LawVar::SignDeltaM: return "sgn_dm";
    case LawVar::DeltaR: return "dr";
    default: return "sgn_dr";
  }
}

std::string shift_str(int s) {
  if (s == 0) return "(k)";
  if (s > 0) return "(k+" + std::to_string(s) + ")";
  return "(k-" + std::to_string(-s) + ")";
}

LawFactor parse_law_factor(const std::string& tok) {
  const auto open = tok.find('(');
  const auto close = tok.find(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw ConfigError("malformed law factor '" + tok + "'");
  }
  const std::string name = tok.substr(0, open);
  LawFactor f;
  if (name == "m") f.var = LawVar::M;
  else if (name == "r") f.var = LawVar::R;
  else if (name == "dm") f.var = LawVar::DeltaM;
  else if (name == "sgn_dm") f.var = LawVar::SignDeltaM;
  else if (name == "dr") f.var = LawVar::DeltaR;
  else if (name == "sgn_dr") f.var = LawVar::SignDeltaR;
  else throw ConfigError("unknown law variable '" + name + "'");

  const std::string idx = tok.substr(open + 1, close - open - 1);
  if (idx == "k") {
    f.shift = 0;
  } else if (idx.size() > 1 && idx[0] == 'k' && (idx[1] == '+' || idx[1] == '-')) {
    try {
      f.shift = std::stoi(idx.substr(1));
    } catch (const std::exception&) {
      throw ConfigError("malformed shift in law factor '" + tok + "'");
    }
  } else {
    throw ConfigError("malformed index in law factor '" + tok + "'");
  }
  f.power = 1;
  if (close + 1 < tok.size()) {
    if (tok[close + 1] != '^') throw ConfigError("malformed law factor '" + tok + "'");
    try {
      f.power = std::stoi(tok.substr(close + 2));
    } catch (const std::exception&) {
      throw ConfigError("malformed power in law factor '" + tok + "'");
    }
  }
  return f;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string law_term_str(const LawTerm& term) {
  if (term.factors.empty()) return "1";
  std::string out;
  for (const auto& f : term.factors) {
    if (!out.empty()) out += "*";
    out += law_var_name(f.var) + shift_str(f.shift);
    if (f.power > 1) out += "^" + std::to_string(f.power);
  }
  return out;
}

void write_law(std::ostream& os, const CompensatorLaw& law) {
  os << "hysid law\n";
  os << "format_version 1\n";
  os << "kind " << (law.kind == CompensatorLaw::Kind::Direct ? "direct" : "inverse") << "\n";
  os << "sample_time " << fmt17(law.sample_time) << "\n";
  os << "divisor " << fmt17(law.divisor) << "\n";
  os << "horizon " << law.horizon << "\n";
  os << "terms " << law.terms.size() << "\n";
  for (const auto& t : law.terms) {
    os << "term " << law_term_str(t) << " " << fmt17(t.coeff) << "\n";
  }
}

void write_law_file(const std::string& path, const CompensatorLaw& law) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  write_law(os, law);
}

CompensatorLaw read_law(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "hysid law") {
    throw ConfigError("not a hysid law file (bad magic line)");
  }
  CompensatorLaw law;
  size_t n_terms = 0;
  bool have_terms = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "format_version") {
      int v = 0;
      ls >> v;
      if (v != 1) throw ConfigError("unsupported law format version");
    } else if (key == "kind") {
      std::string k;
      ls >> k;
      if (k == "direct") law.kind = CompensatorLaw::Kind::Direct;
      else if (k == "inverse") law.kind = CompensatorLaw::Kind::Inverse;
      else throw ConfigError("unknown law kind '" + k + "'");
    } else if (key == "sample_time") {
      ls >> law.sample_time;
    } else if (key == "divisor") {
      ls >> law.divisor;
    } else if (key == "horizon") {
      ls >> law.horizon;
    } else if (key == "terms") {
      ls >> n_terms;
      have_terms = true;
    } else if (key == "term") {
      std::string expr;
      double coeff = 0.0;
      ls >> expr >> coeff;
      if (ls.fail()) throw ConfigError("malformed law term line: '" + line + "'");
      LawTerm t;
      t.coeff = coeff;
      if (expr != "1") {
        std::string tok;
        for (size_t i = 0; i <= expr.size(); ++i) {
          if (i == expr.size() || expr[i] == '*') {
            t.factors.push_back(parse_law_factor(tok));
            tok.clear();
          } else {
            tok += expr[i];
          }
        }
      }
      law.terms.push_back(std::move(t));
    } else {
      throw ConfigError("unknown key '" + key + "' in law file");
    }
  }
  if (!have_terms || law.terms.size() != n_terms) {
    throw ConfigError("law file term count mismatch");
  }
  const int stored_horizon = law.horizon;
  finalize_law(law);
  if (law.horizon != stored_horizon) {
    throw ConfigError("law file horizon does not match its terms");
  }
  return law;
}

CompensatorLaw read_law_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open law file '" + path + "'");
  return read_law(is);
}

}  // namespace hysid
