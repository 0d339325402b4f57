#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace skiprec {

struct Candidate {
  std::uint32_t video;
  double logit;
  bool relevant;
};

/// A user's candidates sorted by descending logit, ties by ascending video index.
struct RankedList {
  std::uint32_t user = 0;
  std::vector<std::uint32_t> videos;
  std::vector<bool> relevant;
  std::size_t n_relevant() const;
};

RankedList rank_user(std::uint32_t user, std::vector<Candidate> candidates);

double precision_at_k(const RankedList& r, std::size_t k);
double recall_at_k(const RankedList& r, std::size_t k);
/// (1 / min(#relevant, k)) * sum_{i<=k} P(i) rel_i
double map_at_k(const RankedList& r, std::size_t k);
/// Binary gains, discount 1 / log2(rank + 1), ideal DCG over min(#relevant, k) hits.
double ndcg_at_k(const RankedList& r, std::size_t k);

enum class Metric { Precision, Recall, Map, Ndcg };
inline constexpr Metric kAllMetrics[] = {Metric::Precision, Metric::Recall, Metric::Map,
                                         Metric::Ndcg};
std::string_view metric_name(Metric m) noexcept;
Metric parse_metric(std::string_view name);
double metric_at_k(Metric m, const RankedList& r, std::size_t k);

}  // namespace skiprec
