#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "skiprec/ingest.hpp"

namespace skiprec {

struct Triplet {
  std::uint32_t user = 0;
  std::uint32_t highly = 0;
  std::optional<std::uint32_t> less;
  std::optional<std::uint32_t> negative;
  // Only filled for the unseen-negative ablation.
  std::optional<std::uint32_t> unseen;

  bool operator==(const Triplet&) const = default;
};

/// Maximum rejection draws for an unseen negative before giving up.
inline constexpr int kUnseenSampleTries = 100;

/// Per-user class pools over the training pairs.
class TripletSampler {
 public:
  TripletSampler(const std::vector<LabeledPair>& train, std::size_t n_users, std::size_t n_videos);

  /// One triplet per training highly positive pair, in (user, video) order.
  /// Partners are uniform draws from the user's pools; an empty pool yields
  /// an absent partner.
  std::vector<Triplet> sample_epoch(std::mt19937_64& rng) const;

  /// Uniform draw among videos outside the user's training interactions.
  /// Empty after kUnseenSampleTries rejected draws.
  std::optional<std::uint32_t> sample_unseen(std::uint32_t user, std::mt19937_64& rng) const;

  /// Fills `unseen` on every triplet; returns how many draws failed.
  std::size_t attach_unseen(std::vector<Triplet>& triplets, std::mt19937_64& rng) const;

  std::size_t triplets_per_epoch() const noexcept { return n_highly_; }
  bool seen(std::uint32_t user, std::uint32_t video) const;

 private:
  struct Pools {
    std::vector<std::uint32_t> highly;
    std::vector<std::uint32_t> less;
    std::vector<std::uint32_t> negative;
    std::vector<std::uint32_t> seen;  // sorted
  };
  std::vector<Pools> users_;
  std::size_t n_videos_ = 0;
  std::size_t n_highly_ = 0;
};

}  // namespace skiprec
