#include "hysid/metrics.hpp"

#include "hysid/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace hysid {

namespace {

void check_window(const Signal& a, const Signal& b, Eigen::Index skip) {
  if (a.size() != b.size()) {
    throw ConfigError("metric inputs must have equal length (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
  if (skip < 0 || skip >= a.size()) {
    throw ConfigError("transient skip " + std::to_string(skip) +
                      " leaves no samples out of " + std::to_string(a.size()));
  }
}

}  // namespace

double mape(const Signal& reference, const Signal& actual, Eigen::Index transient_skip) {
  check_window(reference, actual, transient_skip);
  const Eigen::Index n = reference.size() - transient_skip;
  double lo = reference[transient_skip], hi = lo, acc = 0.0;
  for (Eigen::Index k = transient_skip; k < reference.size(); ++k) {
    const double r = reference[k];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    acc += std::abs(r - actual[k]);
  }
  const double range = hi - lo;
  if (range == 0.0) throw NumericError("MAPE undefined: reference range is zero");
  return 100.0 * acc / (static_cast<double>(n) * range);
}

double nsavi(const Signal& m, const Signal& r, Eigen::Index transient_skip) {
  check_window(m, r, transient_skip);
  double dm = 0.0, dr = 0.0;
  for (Eigen::Index k = transient_skip + 1; k < m.size(); ++k) {
    dm += std::abs(m[k] - m[k - 1]);
    dr += std::abs(r[k] - r[k - 1]);
  }
  if (dr == 0.0) throw NumericError("NSAVI undefined: reference has zero total variation");
  return dm / dr;
}

double nsavi_pointwise(const Signal& m, const Signal& r, Eigen::Index transient_skip,
                       double eps) {
  check_window(m, r, transient_skip);
  double acc = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index k = transient_skip + 1; k < m.size(); ++k) {
    const double dr = std::abs(r[k] - r[k - 1]);
    if (dr <= eps) {
      if (eps == 0.0) {
        throw NumericError("pointwise NSAVI undefined: zero reference increment at index " +
                           std::to_string(k));
      }
      continue;
    }
    acc += std::abs(m[k] - m[k - 1]) / dr;
    ++count;
  }
  if (count == 0) throw NumericError("pointwise NSAVI: no usable reference increments");
  return acc / static_cast<double>(count);
}

void write_metrics(std::ostream& os, const MetricsSummary& summary) {
  char buf[64];
  os << "hysid metrics\nformat_version 1\n";
  std::snprintf(buf, sizeof(buf), "%.17g", summary.mape);
  os << "mape_percent " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", summary.nsavi);
  os << "nsavi " << buf << "\n";
  os << "n_samples " << summary.n_samples << "\n";
  os << "transient_skip " << summary.transient_skip << "\n";
}

}  // namespace hysid
