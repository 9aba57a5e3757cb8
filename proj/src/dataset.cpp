#include "hysid/dataset.hpp"

#include "hysid/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace hysid {

void write_dataset(const std::string& path, const Signal& u, const Signal& y,
                   const nlohmann::json& metadata) {
  if (u.size() != y.size()) throw ConfigError("dataset channels must have equal length");
  if (u.sample_time != y.sample_time) throw ConfigError("dataset channels disagree on T_s");
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open '" + path + "' for writing");
  os << "time_s,u,y\n";
  char buf[128];
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g",
                  static_cast<double>(k) * u.sample_time, u[k], y[k]);
    os << buf << "\n";
  }
  nlohmann::json meta = metadata;
  meta["format_version"] = 1;
  meta["sample_time_s"] = u.sample_time;
  meta["n_samples"] = u.size();
  std::ofstream ms(path + ".meta.json");
  if (!ms) throw ConfigError("cannot open '" + path + ".meta.json' for writing");
  ms << meta.dump(2) << "\n";
}

std::tuple<Signal, Signal, nlohmann::json> read_dataset(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(is, line) || line != "time_s,u,y") {
    throw ConfigError("dataset '" + path + "' missing 'time_s,u,y' header");
  }
  std::vector<double> ts, us, ys;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    double t, uv, yv;
    char extra;
    std::istringstream ls(line);
    char c1 = 0, c2 = 0;
    if (!(ls >> t >> c1 >> uv >> c2 >> yv) || c1 != ',' || c2 != ',') {
      throw ConfigError("dataset '" + path + "' line " + std::to_string(lineno) +
                        ": expected 'time,u,y'");
    }
    if (ls >> extra) {
      throw ConfigError("dataset '" + path + "' line " + std::to_string(lineno) +
                        ": trailing characters");
    }
    ts.push_back(t);
    us.push_back(uv);
    ys.push_back(yv);
  }
  if (ts.size() < 2) throw ConfigError("dataset '" + path + "' has fewer than 2 samples");

  const double t0 = ts[0];
  const double dt = ts[1] - ts[0];
  if (!(dt > 0.0)) throw ConfigError("dataset '" + path + "' has non-increasing time base");
  for (size_t k = 0; k < ts.size(); ++k) {
    const double expect = t0 + dt * static_cast<double>(k);
    const double scale = std::max({1.0, std::abs(expect), std::abs(ts.back())});
    if (std::abs(ts[k] - expect) > 1e-9 * scale) {
      throw ConfigError("dataset '" + path + "' line " + std::to_string(k + 2) +
                        ": non-uniform time base");
    }
  }

  const auto n = static_cast<Eigen::Index>(ts.size());
  Eigen::VectorXd uv(n), yv(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    uv[k] = us[static_cast<size_t>(k)];
    yv[k] = ys[static_cast<size_t>(k)];
  }
  nlohmann::json meta = nlohmann::json::object();
  std::ifstream ms(path + ".meta.json");
  if (ms) {
    try {
      ms >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("dataset sidecar '" + path + ".meta.json' is malformed: " + e.what());
    }
  }
  return {Signal{uv, dt}, Signal{yv, dt}, meta};
}

}  // namespace hysid
