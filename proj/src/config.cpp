#include "skiprec/config.hpp"

#include <set>

#include "skiprec/error.hpp"
#include "text_util.hpp"

namespace skiprec {

std::string_view bpr_mode_name(BprMode mode) noexcept {
  return mode == BprMode::Hierarchical ? "hierarchical" : "unseen_negative";
}

BprMode parse_bpr_mode(std::string_view name) {
  if (name == "hierarchical") return BprMode::Hierarchical;
  if (name == "unseen_negative") return BprMode::UnseenNegative;
  throw UsageError("unknown bpr mode '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw UsageError("lambda must lie in [0, 1]");
  if (batch_size == 0) throw UsageError("batch_size must be positive");
  if (patience == 0) throw UsageError("patience must be positive");
  if (!(threshold > 0.0)) throw UsageError("threshold must be positive");
  if (dim == 0) throw UsageError("dim must be positive");
  if (!(lr0 > 0.0) || !(lr_min >= 0.0) || lr_min > lr0) {
    throw UsageError("learning rates must satisfy 0 <= lr_min <= lr0, lr0 > 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw UsageError("betas must lie in [0, 1)");
  }
  if (!(weight_decay >= 0.0) || !(eps > 0.0)) throw UsageError("invalid weight_decay or eps");
  if (early_stop_k == 0) throw UsageError("early_stop_k must be positive");
}

void RunConfig::validate() const {
  train.validate();
  if (ks.empty()) throw UsageError("at least one k is required");
  for (auto k : ks) {
    if (k == 0) throw UsageError("k must be positive");
  }
  if (repeats == 0) throw UsageError("repeats must be positive");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {
      {"lambda", c.lambda},
      {"batch_size", c.batch_size},
      {"max_epochs", c.max_epochs},
      {"patience", c.patience},
      {"seed", c.seed},
      {"threshold", c.threshold},
      {"dim", c.dim},
      {"graph_mode", graph_mode_name(c.graph_mode)},
      {"bpr_mode", bpr_mode_name(c.bpr_mode)},
      {"feature_mode", feature_mode_name(c.feature_mode)},
      {"lr0", c.lr0},
      {"lr_min", c.lr_min},
      {"beta1", c.beta1},
      {"beta2", c.beta2},
      {"weight_decay", c.weight_decay},
      {"eps", c.eps},
      {"early_stop_k", c.early_stop_k},
      {"include_less_relevant", c.include_less_relevant},
  };
}

nlohmann::json to_json(const RunConfig& c) {
  auto j = to_json(c.train);
  j["interactions_path"] = c.interactions_path;
  j["features_path"] = c.features_path;
  j["split_dir"] = c.split_dir;
  j["out_dir"] = c.out_dir;
  j["repeats"] = c.repeats;
  j["ks"] = c.ks;
  j["variants"] = c.variants;
  return j;
}

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

const std::set<std::string>& train_keys() {
  static const std::set<std::string> keys{
      "lambda", "batch_size", "max_epochs", "patience", "seed", "threshold",
      "dim", "graph_mode", "bpr_mode", "feature_mode", "lr0", "lr_min",
      "beta1", "beta2", "weight_decay", "eps", "early_stop_k", "include_less_relevant"};
  return keys;
}

const std::set<std::string>& run_keys() {
  static const std::set<std::string> keys{"interactions_path", "features_path", "split_dir",
                                          "out_dir", "repeats", "ks", "variants"};
  return keys;
}

void apply_train_keys(const nlohmann::json& j, TrainConfig& c) {
  if (j.contains("lambda")) read(j, "lambda", c.lambda);
  if (j.contains("batch_size")) read(j, "batch_size", c.batch_size);
  if (j.contains("max_epochs")) read(j, "max_epochs", c.max_epochs);
  if (j.contains("patience")) read(j, "patience", c.patience);
  if (j.contains("seed")) read(j, "seed", c.seed);
  if (j.contains("threshold")) read(j, "threshold", c.threshold);
  if (j.contains("dim")) read(j, "dim", c.dim);
  if (j.contains("lr0")) read(j, "lr0", c.lr0);
  if (j.contains("lr_min")) read(j, "lr_min", c.lr_min);
  if (j.contains("beta1")) read(j, "beta1", c.beta1);
  if (j.contains("beta2")) read(j, "beta2", c.beta2);
  if (j.contains("weight_decay")) read(j, "weight_decay", c.weight_decay);
  if (j.contains("eps")) read(j, "eps", c.eps);
  if (j.contains("early_stop_k")) read(j, "early_stop_k", c.early_stop_k);
  if (j.contains("include_less_relevant")) read(j, "include_less_relevant", c.include_less_relevant);
  std::string name;
  if (j.contains("graph_mode")) {
    read(j, "graph_mode", name);
    c.graph_mode = parse_graph_mode(name);
  }
  if (j.contains("bpr_mode")) {
    read(j, "bpr_mode", name);
    c.bpr_mode = parse_bpr_mode(name);
  }
  if (j.contains("feature_mode")) {
    read(j, "feature_mode", name);
    c.feature_mode = parse_feature_mode(name);
  }
}

}  // namespace

void apply_json(const nlohmann::json& j, TrainConfig& c) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!train_keys().count(key)) throw UsageError("unknown config key '" + key + "'");
  }
  apply_train_keys(j, c);
}

void apply_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!train_keys().count(key) && !run_keys().count(key)) {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  apply_train_keys(j, c.train);
  if (j.contains("interactions_path")) read(j, "interactions_path", c.interactions_path);
  if (j.contains("features_path")) read(j, "features_path", c.features_path);
  if (j.contains("split_dir")) read(j, "split_dir", c.split_dir);
  if (j.contains("out_dir")) read(j, "out_dir", c.out_dir);
  if (j.contains("repeats")) read(j, "repeats", c.repeats);
  if (j.contains("ks")) read(j, "ks", c.ks);
  if (j.contains("variants")) read(j, "variants", c.variants);
}

std::vector<std::size_t> parse_k_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (auto field : detail::split_fields(text)) {
    const auto v = detail::parse_int(field);
    if (!v || *v <= 0) throw UsageError("invalid k list '" + std::string(text) + "'");
    out.push_back(static_cast<std::size_t>(*v));
  }
  return out;
}

}  // namespace skiprec
