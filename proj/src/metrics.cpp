#include "skiprec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skiprec/error.hpp"

namespace skiprec {

std::size_t RankedList::n_relevant() const {
  return static_cast<std::size_t>(std::count(relevant.begin(), relevant.end(), true));
}

RankedList rank_user(std::uint32_t user, std::vector<Candidate> candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.logit != b.logit) return a.logit > b.logit;
    return a.video < b.video;
  });
  RankedList out;
  out.user = user;
  std::vector<std::uint32_t> ids;
  ids.reserve(candidates.size());
  for (const auto& c : candidates) ids.push_back(c.video);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw DataError("duplicate candidate video in ranked list");
  }
  for (const auto& c : candidates) {
    out.videos.push_back(c.video);
    out.relevant.push_back(c.relevant);
  }
  return out;
}

namespace {

std::size_t hits_at(const RankedList& r, std::size_t k) {
  const std::size_t n = std::min(k, r.relevant.size());
  return static_cast<std::size_t>(std::count(r.relevant.begin(), r.relevant.begin() + n, true));
}

void check_k(std::size_t k) {
  if (k == 0) throw UsageError("k must be at least 1");
}

}  // namespace

double precision_at_k(const RankedList& r, std::size_t k) {
  check_k(k);
  return static_cast<double>(hits_at(r, k)) / static_cast<double>(k);
}

double recall_at_k(const RankedList& r, std::size_t k) {
  check_k(k);
  const auto rel = r.n_relevant();
  return rel == 0 ? 0.0 : static_cast<double>(hits_at(r, k)) / static_cast<double>(rel);
}

double map_at_k(const RankedList& r, std::size_t k) {
  check_k(k);
  const auto rel = r.n_relevant();
  if (rel == 0) return 0.0;
  const std::size_t n = std::min(k, r.relevant.size());
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.relevant[i]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(std::min(rel, k));
}

double ndcg_at_k(const RankedList& r, std::size_t k) {
  check_k(k);
  const auto rel = r.n_relevant();
  if (rel == 0) return 0.0;
  const std::size_t n = std::min(k, r.relevant.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.relevant[i]) dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(rel, k); ++i) idcg += 1.0 / std::log2(static_cast<double>(i + 2));
  return dcg / idcg;
}

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::Precision: return "precision";
    case Metric::Recall: return "recall";
    case Metric::Map: return "map";
    case Metric::Ndcg: return "ndcg";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (auto m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  throw UsageError("unknown metric '" + std::string(name) + "'");
}

double metric_at_k(Metric m, const RankedList& r, std::size_t k) {
  switch (m) {
    case Metric::Precision: return precision_at_k(r, k);
    case Metric::Recall: return recall_at_k(r, k);
    case Metric::Map: return map_at_k(r, k);
    case Metric::Ndcg: return ndcg_at_k(r, k);
  }
  return 0.0;
}

}  // namespace skiprec
