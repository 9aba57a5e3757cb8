#include "hysid/model.hpp"

#include "hysid/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace hysid {

void NarxModel::validate() const {
  if (theta.size() != static_cast<Eigen::Index>(terms.size())) {
    throw ConfigError("model has " + std::to_string(terms.size()) + " terms but " +
                      std::to_string(theta.size()) + " parameters");
  }
  if (tau_d < 1) throw ConfigError("model tau_d must be >= 1");
  if (tau_s < 0) throw ConfigError("model tau_s must be >= 0");
  if (!(sample_time > 0.0)) throw ConfigError("model sample_time must be > 0");
  for (const auto& t : terms) {
    if (t.max_lag(SignalKind::Output) > n_y) {
      throw ConfigError("term " + t.str() + " exceeds n_y = " + std::to_string(n_y));
    }
    const int ulag = std::max({t.max_lag(SignalKind::Input), t.max_lag(SignalKind::Phi1),
                               t.max_lag(SignalKind::Phi2)});
    if (ulag > n_u) {
      throw ConfigError("term " + t.str() + " exceeds n_u = " + std::to_string(n_u));
    }
  }
}

NarxModel NarxModel::from_terms(std::vector<Term> terms, Eigen::VectorXd theta,
                                int tau_d, int tau_s, double sample_time) {
  NarxModel m;
  m.terms = std::move(terms);
  m.theta = std::move(theta);
  m.tau_d = tau_d;
  m.tau_s = tau_s;
  m.sample_time = sample_time;
  m.n_y = 1;
  m.n_u = 1;
  for (const auto& t : m.terms) {
    m.n_y = std::max(m.n_y, t.max_lag(SignalKind::Output));
    m.n_u = std::max({m.n_u, t.max_lag(SignalKind::Input), t.max_lag(SignalKind::Phi1),
                      t.max_lag(SignalKind::Phi2)});
  }
  m.validate();
  return m;
}

int NarxModel::term_index(const Term& t) const {
  for (size_t i = 0; i < terms.size(); ++i) {
    if (terms[i] == t) return static_cast<int>(i);
  }
  return -1;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_model(std::ostream& os, const NarxModel& model) {
  os << "hysid model\n";
  os << "format_version 1\n";
  os << "sample_time " << fmt17(model.sample_time) << "\n";
  os << "n_y " << model.n_y << "\n";
  os << "n_u " << model.n_u << "\n";
  os << "tau_d " << model.tau_d << "\n";
  os << "tau_s " << model.tau_s << "\n";
  os << "terms " << model.terms.size() << "\n";
  for (size_t i = 0; i < model.terms.size(); ++i) {
    os << "term " << model.terms[i].str() << " " << fmt17(model.theta[static_cast<Eigen::Index>(i)])
       << "\n";
  }
}

void write_model_file(const std::string& path, const NarxModel& model) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  write_model(os, model);
}

NarxModel read_model(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "hysid model") {
    throw ConfigError("not a hysid model file (bad magic line)");
  }
  NarxModel m;
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
      if (v != 1) throw ConfigError("unsupported model format version " + std::to_string(v));
    } else if (key == "sample_time") {
      ls >> m.sample_time;
    } else if (key == "n_y") {
      ls >> m.n_y;
    } else if (key == "n_u") {
      ls >> m.n_u;
    } else if (key == "tau_d") {
      ls >> m.tau_d;
    } else if (key == "tau_s") {
      ls >> m.tau_s;
    } else if (key == "terms") {
      ls >> n_terms;
      have_terms = true;
    } else if (key == "term") {
      std::string expr;
      double value = 0.0;
      ls >> expr >> value;
      if (ls.fail()) throw ConfigError("malformed term line: '" + line + "'");
      m.terms.push_back(Term::parse(expr));
      m.theta.conservativeResize(m.theta.size() + 1);
      m.theta[m.theta.size() - 1] = value;
    } else {
      throw ConfigError("unknown key '" + key + "' in model file");
    }
  }
  if (!have_terms || m.terms.size() != n_terms) {
    throw ConfigError("model file term count mismatch");
  }
  m.validate();
  return m;
}

NarxModel read_model_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open model file '" + path + "'");
  return read_model(is);
}

}  // namespace hysid
