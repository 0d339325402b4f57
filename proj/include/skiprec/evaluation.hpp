#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skiprec/graph.hpp"
#include "skiprec/ingest.hpp"
#include "skiprec/metrics.hpp"
#include "skiprec/model.hpp"

namespace skiprec {

struct MetricSummary {
  Metric metric;
  std::size_t k;
  double mean;
  double stddev;  // sample standard deviation across evaluated users
};

struct MetricsReport {
  std::string variant;
  std::uint64_t seed = 0;
  std::vector<MetricSummary> values;  // metric-major, k in requested order
  std::size_t users_evaluated = 0;
  std::size_t users_excluded = 0;  // users whose candidates hold no relevant item

  /// Throws UsageError when (metric, k) was not computed.
  double mean(Metric metric, std::size_t k) const;
};

/// Candidates of each user are exactly that user's pairs in `pairs`. Relevant
/// means highly positive, or highly/less positive with `include_less`.
std::vector<RankedList> rank_users(const Matrix& h_u, const Matrix& h_v, const ModelParams& params,
                                   const std::vector<LabeledPair>& pairs, bool include_less);

/// Macro average over users with at least one relevant candidate.
/// Throws DataError when no user qualifies.
MetricsReport summarize(const std::vector<RankedList>& lists, const std::vector<std::size_t>& ks);

MetricsReport evaluate(const ModelParams& params, const DualGraphs& graphs,
                       const std::vector<LabeledPair>& pairs, const std::vector<std::size_t>& ks,
                       bool include_less = false);

}  // namespace skiprec
