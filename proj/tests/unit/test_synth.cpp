#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "skiprec/error.hpp"
#include "skiprec/losses.hpp"
#include "skiprec/synth.hpp"

using namespace skiprec;

TEST_CASE("playing time follows the affinity tier") {
  SynthConfig c;
  c.n_users = 200;
  c.n_videos = 150;
  c.feature_dim = 6;
  const auto d = generate(c);
  REQUIRE(d.interactions.size() == 200 * 30);
  for (const auto& it : d.interactions) {
    const auto u = std::stoul(it.user_id.substr(1));
    const auto v = std::stoul(it.video_id.substr(1));
    const double a = d.truth.affinity(u, v);
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    CHECK(it.duration > c.duration_min);
    CHECK(it.duration < c.duration_max);
    const auto cls = classify(it, 5.0);
    if (a >= c.tau_high) {
      CHECK(it.playing_time == it.duration);
      CHECK(cls == InteractionClass::HighlyPositive);
    } else if (a >= c.tau_low) {
      CHECK(it.playing_time > 5.0);
      CHECK(it.playing_time < it.duration);
      CHECK(cls == InteractionClass::LessPositive);
    } else {
      CHECK(it.playing_time > 0.0);
      CHECK(it.playing_time <= 5.0);
      CHECK(cls == InteractionClass::Negative);
    }
  }
}

TEST_CASE("users see distinct videos") {
  SynthConfig c;
  c.n_users = 50;
  c.n_videos = 40;
  c.interactions_per_user = 40;
  c.feature_dim = 4;
  const auto d = generate(c);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& it : d.interactions) pairs.insert({it.user_id, it.video_id});
  CHECK(pairs.size() == d.interactions.size());
}

TEST_CASE("class proportions converge to the affinity-tier measure") {
  SynthConfig c;
  c.n_users = 4000;
  c.n_videos = 500;
  c.interactions_per_user = 25;
  c.feature_dim = 2;
  c.seed = 12;
  const auto d = generate(c);
  const auto h = tier_histogram(d.interactions, 5.0);
  const double n = double(d.interactions.size());
  REQUIRE(n == 1e5);

  // Tier measure of sigmoid(u.v) with u, v ~ N(0, s^2 I_r), from fresh draws.
  std::mt19937_64 rng(999);
  const double s = std::sqrt(c.affinity_scale / std::sqrt(double(c.rank)));
  std::normal_distribution<double> nd(0.0, s);
  double tiers[3] = {0, 0, 0};
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < c.rank; ++k) dot += nd(rng) * nd(rng);
    const double a = sigmoid(dot);
    tiers[a >= c.tau_high ? 0 : (a >= c.tau_low ? 1 : 2)] += 1;
  }
  for (int t = 0; t < 3; ++t) {
    CAPTURE(t);
    CHECK(std::abs(h[t] / n - tiers[t] / draws) < 0.01);
  }
  // Near-uniform affinities give roughly 30/40/30.
  CHECK(std::abs(h[0] / n - 0.3) < 0.02);
  CHECK(std::abs(h[1] / n - 0.4) < 0.02);
  CHECK(std::abs(h[2] / n - 0.3) < 0.02);
}

TEST_CASE("threshold zero leaves no negatives") {
  SynthConfig c;
  c.n_users = 100;
  c.n_videos = 100;
  c.feature_dim = 2;
  const auto h = tier_histogram(generate(c).interactions, 0.0);
  CHECK(h[2] == 0);
}

TEST_CASE("all affinities above the top cutoff gives all highly positive") {
  SynthConfig c;
  c.n_users = 60;
  c.n_videos = 50;
  c.feature_dim = 2;
  c.affinity_scale = 1e-12;
  c.tau_high = 0.4;
  c.tau_low = 0.2;
  const auto d = generate(c);
  const auto h = tier_histogram(d.interactions, 5.0);
  CHECK(h[0] == d.interactions.size());
}

TEST_CASE("same seed regenerates byte-identical files") {
  SynthConfig c;
  c.n_users = 80;
  c.n_videos = 60;
  c.feature_dim = 5;
  c.seed = 21;
  const auto a = generate(c);
  const auto b = generate(c);
  CHECK(a.interactions_csv == b.interactions_csv);
  CHECK(a.features_csv == b.features_csv);
  c.seed = 22;
  CHECK(generate(c).interactions_csv != a.interactions_csv);
}

TEST_CASE("feature noise is additive with the configured spread") {
  SynthConfig c;
  c.n_users = 10;
  c.n_videos = 200;
  c.feature_dim = 32;
  c.feature_noise = 0.0;
  const auto clean = generate(c);
  c.feature_noise = 0.1;
  const auto noisy = generate(c);
  REQUIRE(clean.features.rows() == 200);
  REQUIRE(clean.features.cols() == 32);
  double ss = 0.0, signal = 0.0;
  for (std::size_t i = 0; i < clean.features.size(); ++i) {
    const double e = noisy.features.data()[i] - clean.features.data()[i];
    ss += e * e;
    signal += clean.features.data()[i] * clean.features.data()[i];
  }
  CHECK(std::sqrt(ss / double(clean.features.size())) == doctest::Approx(0.1).epsilon(0.05));
  CHECK(signal > ss);
  CHECK(clean.truth.video_factors == noisy.truth.video_factors);
}

TEST_CASE("invalid configurations") {
  SynthConfig c;
  c.tau_low = 0.8;
  CHECK_THROWS_AS(generate(c), UsageError);
  c = {};
  c.duration_min = 3.0;
  CHECK_THROWS_AS(generate(c), UsageError);
  c = {};
  c.duration_max = 90.0;
  CHECK_THROWS_AS(generate(c), UsageError);
  c = {};
  c.interactions_per_user = c.n_videos + 1;
  CHECK_THROWS_AS(generate(c), UsageError);
}

TEST_CASE("synth config json round trip") {
  SynthConfig c;
  c.n_users = 7;
  c.tau_high = 0.8;
  SynthConfig d;
  apply_json(to_json(c), d);
  CHECK(to_json(d) == to_json(c));
  CHECK_THROWS_AS(apply_json(nlohmann::json{{"nope", 1}}, d), UsageError);
}
