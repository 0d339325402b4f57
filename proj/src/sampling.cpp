#include "skiprec/sampling.hpp"

#include <algorithm>

namespace skiprec {

TripletSampler::TripletSampler(const std::vector<LabeledPair>& train, std::size_t n_users,
                               std::size_t n_videos)
    : users_(n_users), n_videos_(n_videos) {
  for (const auto& p : train) {
    auto& pools = users_.at(p.user);
    switch (p.cls) {
      case InteractionClass::HighlyPositive:
        pools.highly.push_back(p.video);
        ++n_highly_;
        break;
      case InteractionClass::LessPositive: pools.less.push_back(p.video); break;
      case InteractionClass::Negative: pools.negative.push_back(p.video); break;
    }
    pools.seen.push_back(p.video);
  }
  for (auto& pools : users_) {
    std::sort(pools.highly.begin(), pools.highly.end());
    std::sort(pools.less.begin(), pools.less.end());
    std::sort(pools.negative.begin(), pools.negative.end());
    std::sort(pools.seen.begin(), pools.seen.end());
  }
}

namespace {

std::optional<std::uint32_t> pick(const std::vector<std::uint32_t>& pool, std::mt19937_64& rng) {
  if (pool.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
  return pool[dist(rng)];
}

}  // namespace

std::vector<Triplet> TripletSampler::sample_epoch(std::mt19937_64& rng) const {
  std::vector<Triplet> out;
  out.reserve(n_highly_);
  for (std::size_t u = 0; u < users_.size(); ++u) {
    const auto& pools = users_[u];
    for (auto h : pools.highly) {
      Triplet t;
      t.user = static_cast<std::uint32_t>(u);
      t.highly = h;
      t.less = pick(pools.less, rng);
      t.negative = pick(pools.negative, rng);
      out.push_back(t);
    }
  }
  return out;
}

bool TripletSampler::seen(std::uint32_t user, std::uint32_t video) const {
  const auto& s = users_.at(user).seen;
  return std::binary_search(s.begin(), s.end(), video);
}

std::optional<std::uint32_t> TripletSampler::sample_unseen(std::uint32_t user,
                                                           std::mt19937_64& rng) const {
  if (n_videos_ == 0) return std::nullopt;
  std::uniform_int_distribution<std::uint32_t> dist(0, static_cast<std::uint32_t>(n_videos_ - 1));
  for (int attempt = 0; attempt < kUnseenSampleTries; ++attempt) {
    const auto v = dist(rng);
    if (!seen(user, v)) return v;
  }
  return std::nullopt;
}

std::size_t TripletSampler::attach_unseen(std::vector<Triplet>& triplets,
                                          std::mt19937_64& rng) const {
  std::size_t failures = 0;
  for (auto& t : triplets) {
    t.unseen = sample_unseen(t.user, rng);
    if (!t.unseen) ++failures;
  }
  return failures;
}

}  // namespace skiprec
