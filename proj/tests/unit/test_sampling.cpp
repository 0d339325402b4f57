#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "skiprec/sampling.hpp"

using namespace skiprec;
using C = InteractionClass;

TEST_CASE("singleton pools force the triplet") {
  const std::vector<LabeledPair> train{{0, 1, C::HighlyPositive}, {0, 2, C::LessPositive},
                                       {0, 3, C::Negative}};
  TripletSampler s(train, 1, 4);
  std::mt19937_64 rng(0);
  const auto t = s.sample_epoch(rng);
  REQUIRE(t.size() == 1);
  CHECK(t[0].user == 0);
  CHECK(t[0].highly == 1);
  CHECK(t[0].less == 2u);
  CHECK(t[0].negative == 3u);
}

TEST_CASE("missing less pool leaves the slot absent") {
  const std::vector<LabeledPair> train{{0, 1, C::HighlyPositive}, {0, 3, C::Negative}};
  TripletSampler s(train, 1, 4);
  std::mt19937_64 rng(0);
  const auto t = s.sample_epoch(rng);
  REQUIRE(t.size() == 1);
  CHECK_FALSE(t[0].less.has_value());
  CHECK(t[0].negative == 3u);
}

TEST_CASE("one triplet per highly positive pair, deterministic") {
  std::mt19937_64 g(8);
  const auto train = testutil::random_pairs(20, 30, 0.3, g);
  std::size_t n_h = 0;
  for (const auto& p : train) n_h += p.cls == C::HighlyPositive;
  TripletSampler s(train, 20, 30);
  CHECK(s.triplets_per_epoch() == n_h);
  std::mt19937_64 a(5), b(5);
  const auto ta = s.sample_epoch(a);
  const auto tb = s.sample_epoch(b);
  REQUIRE(ta.size() == n_h);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta[i].highly == tb[i].highly);
    CHECK(ta[i].less == tb[i].less);
    CHECK(ta[i].negative == tb[i].negative);
  }
}

TEST_CASE("unseen draws avoid the user's train pairs") {
  std::mt19937_64 g(9);
  const auto train = testutil::random_pairs(10, 15, 0.5, g);
  TripletSampler s(train, 10, 15);
  std::mt19937_64 rng(1);
  for (std::uint32_t u = 0; u < 10; ++u)
    for (int i = 0; i < 50; ++i) {
      const auto v = s.sample_unseen(u, rng);
      if (v) CHECK_FALSE(s.seen(u, *v));
    }
}

TEST_CASE("users who saw everything are skipped after the retry cap") {
  const std::vector<LabeledPair> train{{0, 0, C::HighlyPositive}, {0, 1, C::Negative}};
  TripletSampler s(train, 1, 2);
  std::mt19937_64 rng(2);
  CHECK_FALSE(s.sample_unseen(0, rng).has_value());
  auto t = s.sample_epoch(rng);
  CHECK(s.attach_unseen(t, rng) == 1);
  CHECK_FALSE(t[0].unseen.has_value());
}
