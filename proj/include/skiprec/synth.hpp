#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "skiprec/ingest.hpp"
#include "skiprec/matrix.hpp"

namespace skiprec {

struct SynthConfig {
  std::size_t n_users = 2000;
  std::size_t n_videos = 1000;
  std::size_t rank = 8;
  std::size_t interactions_per_user = 30;
  double duration_min = 8.0;
  double duration_max = 60.0;
  double tau_high = 0.7;
  double tau_low = 0.3;
  double quick_skip_window = 5.0;
  // Standard deviation of u.v; ~1.8 makes sigmoid(u.v) close to uniform.
  double affinity_scale = 1.8;
  std::size_t feature_dim = 128;
  double feature_noise = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const SynthConfig& c);
void apply_json(const nlohmann::json& j, SynthConfig& c);

struct SynthTruth {
  Matrix user_factors;   // |U| x r
  Matrix video_factors;  // |V| x r
  double affinity(std::size_t user, std::size_t video) const;  // sigmoid(u . v)
};

struct SynthData {
  std::vector<Interaction> interactions;
  std::string interactions_csv;
  std::string features_csv;
  Matrix features;  // |V| x feature_dim, row i is video "v<i>"
  SynthTruth truth;
};

/// Each user views `interactions_per_user` distinct videos drawn uniformly.
/// Affinity >= tau_high: watched to the end. tau_low <= affinity < tau_high:
/// skipped after the quick-skip window. Below tau_low: skipped inside it.
/// Features are the true video factors projected to feature_dim plus noise.
SynthData generate(const SynthConfig& config);

/// Class counts (H, L, N) after classification at `threshold`.
std::array<std::size_t, 3> tier_histogram(const std::vector<Interaction>& interactions,
                                          double threshold);

std::string interactions_to_csv(const std::vector<Interaction>& interactions);
std::string features_to_csv(const Matrix& features, const std::vector<std::string>& video_ids);

}  // namespace skiprec
