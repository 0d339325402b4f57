#include "skiprec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "skiprec/error.hpp"
#include "skiprec/losses.hpp"
#include "text_util.hpp"

namespace skiprec {

void SynthConfig::validate() const {
  if (n_users == 0 || n_videos == 0 || rank == 0 || feature_dim == 0) {
    throw UsageError("synth sizes must be positive");
  }
  if (interactions_per_user == 0 || interactions_per_user > n_videos) {
    throw UsageError("interactions_per_user must lie in [1, n_videos]");
  }
  if (!(tau_low > 0.0 && tau_low < tau_high && tau_high < 1.0)) {
    throw UsageError("affinity cutoffs must satisfy 0 < tau_low < tau_high < 1");
  }
  if (!(quick_skip_window > 0.0)) throw UsageError("quick_skip_window must be positive");
  if (duration_min < quick_skip_window) {
    throw UsageError("duration_min below the quick-skip window leaves no room for delayed skips");
  }
  if (!(duration_min >= 5.0 && duration_max <= 60.0 && duration_min < duration_max)) {
    throw UsageError("duration range must lie within [5, 60] seconds");
  }
  if (!(affinity_scale > 0.0) || !(feature_noise >= 0.0)) {
    throw UsageError("affinity_scale must be positive and feature_noise non-negative");
  }
}

nlohmann::json to_json(const SynthConfig& c) {
  return {{"n_users", c.n_users},
          {"n_videos", c.n_videos},
          {"rank", c.rank},
          {"interactions_per_user", c.interactions_per_user},
          {"duration_min", c.duration_min},
          {"duration_max", c.duration_max},
          {"tau_high", c.tau_high},
          {"tau_low", c.tau_low},
          {"quick_skip_window", c.quick_skip_window},
          {"affinity_scale", c.affinity_scale},
          {"feature_dim", c.feature_dim},
          {"feature_noise", c.feature_noise},
          {"seed", c.seed}};
}

void apply_json(const nlohmann::json& j, SynthConfig& c) {
  if (!j.is_object()) throw UsageError("synth config must be a JSON object");
  const auto defaults = to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw UsageError("unknown synth config key '" + key + "'");
  }
  try {
    if (j.contains("n_users")) c.n_users = j["n_users"].get<std::size_t>();
    if (j.contains("n_videos")) c.n_videos = j["n_videos"].get<std::size_t>();
    if (j.contains("rank")) c.rank = j["rank"].get<std::size_t>();
    if (j.contains("interactions_per_user")) {
      c.interactions_per_user = j["interactions_per_user"].get<std::size_t>();
    }
    if (j.contains("duration_min")) c.duration_min = j["duration_min"].get<double>();
    if (j.contains("duration_max")) c.duration_max = j["duration_max"].get<double>();
    if (j.contains("tau_high")) c.tau_high = j["tau_high"].get<double>();
    if (j.contains("tau_low")) c.tau_low = j["tau_low"].get<double>();
    if (j.contains("quick_skip_window")) c.quick_skip_window = j["quick_skip_window"].get<double>();
    if (j.contains("affinity_scale")) c.affinity_scale = j["affinity_scale"].get<double>();
    if (j.contains("feature_dim")) c.feature_dim = j["feature_dim"].get<std::size_t>();
    if (j.contains("feature_noise")) c.feature_noise = j["feature_noise"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("synth config: ") + e.what());
  }
}

double SynthTruth::affinity(std::size_t user, std::size_t video) const {
  double s = 0.0;
  for (std::size_t c = 0; c < user_factors.cols(); ++c) {
    s += user_factors(user, c) * video_factors(video, c);
  }
  return sigmoid(s);
}

namespace {

std::mt19937_64 substream(std::uint64_t seed, std::uint32_t tag, std::uint32_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag,
                    index};
  return std::mt19937_64(seq);
}

/// Uniform draw on the open interval (lo, hi).
double open_uniform(double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  double x = dist(rng);
  while (x <= lo || x >= hi) x = dist(rng);
  return x;
}

}  // namespace

SynthData generate(const SynthConfig& config) {
  config.validate();
  SynthData out;
  const std::size_t r = config.rank;
  // Var(u.v) = r s^4 for iid N(0, s^2) factors.
  const double factor_sd = std::sqrt(config.affinity_scale / std::sqrt(static_cast<double>(r)));

  out.truth.video_factors = Matrix(config.n_videos, r);
  Matrix projection(r, config.feature_dim);
  {
    auto rng = substream(config.seed, 1, 0);
    std::normal_distribution<double> factor(0.0, factor_sd);
    for (auto& x : out.truth.video_factors.flat()) x = factor(rng);
    std::normal_distribution<double> proj(0.0, 1.0 / std::sqrt(static_cast<double>(r)));
    for (auto& x : projection.flat()) x = proj(rng);
  }
  out.features = Matrix(config.n_videos, config.feature_dim);
  {
    auto rng = substream(config.seed, 2, 0);
    std::normal_distribution<double> noise(0.0, config.feature_noise);
    for (std::size_t v = 0; v < config.n_videos; ++v) {
      for (std::size_t f = 0; f < config.feature_dim; ++f) {
        double x = 0.0;
        for (std::size_t c = 0; c < r; ++c) x += out.truth.video_factors(v, c) * projection(c, f);
        out.features(v, f) = x + (config.feature_noise > 0.0 ? noise(rng) : 0.0);
      }
    }
  }

  out.truth.user_factors = Matrix(config.n_users, r);
  std::vector<std::uint32_t> catalog(config.n_videos);
  std::iota(catalog.begin(), catalog.end(), 0u);
  out.interactions.reserve(config.n_users * config.interactions_per_user);
  for (std::size_t u = 0; u < config.n_users; ++u) {
    auto rng = substream(config.seed, 3, static_cast<std::uint32_t>(u));
    std::normal_distribution<double> factor(0.0, factor_sd);
    for (std::size_t c = 0; c < r; ++c) out.truth.user_factors(u, c) = factor(rng);

    // Partial Fisher-Yates: the first interactions_per_user slots are a
    // uniform sample without replacement.
    auto pool = catalog;
    for (std::size_t i = 0; i < config.interactions_per_user; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    for (std::size_t i = 0; i < config.interactions_per_user; ++i) {
      const std::uint32_t v = pool[i];
      const double affinity = out.truth.affinity(u, v);
      Interaction it;
      it.user_id = "u" + std::to_string(u);
      it.video_id = "v" + std::to_string(v);
      it.duration = open_uniform(config.duration_min, config.duration_max, rng);
      if (affinity >= config.tau_high) {
        it.playing_time = it.duration;
      } else if (affinity >= config.tau_low) {
        it.playing_time = open_uniform(config.quick_skip_window, it.duration, rng);
      } else {
        // (0, window]: reflect [0, window) so the endpoint is included.
        std::uniform_real_distribution<double> quick(0.0, config.quick_skip_window);
        it.playing_time = config.quick_skip_window - quick(rng);
      }
      it.timestamp = static_cast<std::int64_t>(1'600'000'000'000LL + (u * 1000 + i) * 1000);
      out.interactions.push_back(std::move(it));
    }
  }

  std::vector<std::string> video_ids(config.n_videos);
  for (std::size_t v = 0; v < config.n_videos; ++v) video_ids[v] = "v" + std::to_string(v);
  out.interactions_csv = interactions_to_csv(out.interactions);
  out.features_csv = features_to_csv(out.features, video_ids);
  return out;
}

std::array<std::size_t, 3> tier_histogram(const std::vector<Interaction>& interactions,
                                          double threshold) {
  std::array<std::size_t, 3> counts{};
  for (const auto& it : interactions) ++counts[static_cast<std::size_t>(classify(it, threshold))];
  return counts;
}

std::string interactions_to_csv(const std::vector<Interaction>& interactions) {
  std::string out = "user_id,video_id,playing_time,duration,timestamp\n";
  for (const auto& it : interactions) {
    out += it.user_id;
    out += ',';
    out += it.video_id;
    out += ',';
    out += detail::format_double(it.playing_time);
    out += ',';
    out += detail::format_double(it.duration);
    out += ',';
    out += std::to_string(it.timestamp);
    out += '\n';
  }
  return out;
}

std::string features_to_csv(const Matrix& features, const std::vector<std::string>& video_ids) {
  std::string out = "video_id";
  for (std::size_t f = 0; f < features.cols(); ++f) out += ",f" + std::to_string(f);
  out += '\n';
  for (std::size_t v = 0; v < features.rows(); ++v) {
    out += video_ids.at(v);
    for (std::size_t f = 0; f < features.cols(); ++f) {
      out += ',';
      out += detail::format_double(features(v, f));
    }
    out += '\n';
  }
  return out;
}

}  // namespace skiprec
