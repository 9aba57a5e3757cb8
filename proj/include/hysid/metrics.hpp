#pragma once

#include "hysid/signal.hpp"

#include <iosfwd>

namespace hysid {

struct MetricsSummary {
  double mape{0.0};   // percent
  double nsavi{0.0};  // dimensionless
  Eigen::Index n_samples{0};
  Eigen::Index transient_skip{0};
};

/// 100 * sum|ref - act| / (N * |max(ref) - min(ref)|) over the retained
/// samples. Throws NumericError when the retained reference range is zero.
double mape(const Signal& reference, const Signal& actual, Eigen::Index transient_skip = 0);

/// Compensation effort: sum|dm| / sum|dr| over the retained samples, so the
/// identity mapping scores exactly 1.
double nsavi(const Signal& m, const Signal& r, Eigen::Index transient_skip = 0);

/// Literal pointwise form sum_k |dm_k| / |dr_k|, normalized by the retained
/// increment count. Increments with |dr| <= eps are skipped when eps > 0;
/// with eps = 0 a zero reference increment raises NumericError.
double nsavi_pointwise(const Signal& m, const Signal& r, Eigen::Index transient_skip = 0,
                       double eps = 0.0);

void write_metrics(std::ostream& os, const MetricsSummary& summary);

}  // namespace hysid
