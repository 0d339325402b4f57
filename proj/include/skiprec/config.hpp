#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "skiprec/graph.hpp"
#include "skiprec/model.hpp"

namespace skiprec {

/// Hierarchical: average of highly-vs-less and highly-vs-negative BPR.
/// UnseenNegative: single BPR against videos outside the user's history.
enum class BprMode { Hierarchical, UnseenNegative };

std::string_view bpr_mode_name(BprMode mode) noexcept;
BprMode parse_bpr_mode(std::string_view name);

struct TrainConfig {
  double lambda = 0.5;
  std::size_t batch_size = 1024;
  std::size_t max_epochs = 30;
  std::size_t patience = 5;
  std::uint64_t seed = 0;
  double threshold = 5.0;
  std::size_t dim = 128;
  GraphMode graph_mode = GraphMode::Dual;
  BprMode bpr_mode = BprMode::Hierarchical;
  FeatureMode feature_mode = FeatureMode::Fixed;
  double lr0 = 1e-3;
  double lr_min = 1e-6;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 1e-4;
  double eps = 1e-8;
  // Validation metric driving early stopping is recall@early_stop_k.
  std::size_t early_stop_k = 3;
  // Count less positive test items as relevant when ranking (sensitivity check).
  bool include_less_relevant = false;

  void validate() const;
};

struct RunConfig {
  TrainConfig train;
  std::string interactions_path;
  std::string features_path;
  std::string split_dir;
  std::string out_dir = "out";
  std::size_t repeats = 10;
  std::vector<std::size_t> ks{3, 5};
  std::vector<std::string> variants;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& c);
nlohmann::json to_json(const RunConfig& c);
/// Flat keys; unknown keys are rejected, missing keys keep their defaults.
void apply_json(const nlohmann::json& j, TrainConfig& c);
void apply_json(const nlohmann::json& j, RunConfig& c);

/// Parses "3,5" style lists.
std::vector<std::size_t> parse_k_list(std::string_view text);

}  // namespace skiprec
