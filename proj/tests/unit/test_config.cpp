#include "doctest.h"
#include "skiprec/config.hpp"
#include "skiprec/error.hpp"

using namespace skiprec;

TEST_CASE("defaults follow the training protocol") {
  const RunConfig c;
  CHECK(c.train.lambda == 0.5);
  CHECK(c.train.batch_size == 1024);
  CHECK(c.train.max_epochs == 30);
  CHECK(c.train.patience == 5);
  CHECK(c.train.dim == 128);
  CHECK(c.train.threshold == 5.0);
  CHECK(c.train.lr0 == 1e-3);
  CHECK(c.train.lr_min == 1e-6);
  CHECK(c.train.early_stop_k == 3);
  CHECK(c.repeats == 10);
  CHECK(c.ks == std::vector<std::size_t>{3, 5});
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("json round trip and overrides") {
  RunConfig a;
  a.train.lambda = 0.25;
  a.train.graph_mode = GraphMode::Total;
  a.train.bpr_mode = BprMode::UnseenNegative;
  a.train.feature_mode = FeatureMode::Learnable;
  a.ks = {1, 10};
  a.variants = {"dual", "total"};
  a.out_dir = "x";
  RunConfig b;
  apply_json(to_json(a), b);
  CHECK(to_json(b) == to_json(a));

  RunConfig partial;
  apply_json(nlohmann::json{{"dim", 16}}, partial);
  CHECK(partial.train.dim == 16);
  CHECK(partial.train.lambda == 0.5);
}

TEST_CASE("bad configurations are usage errors") {
  RunConfig c;
  CHECK_THROWS_AS(apply_json(nlohmann::json{{"dimension", 3}}, c), UsageError);
  CHECK_THROWS_AS(apply_json(nlohmann::json{{"dim", "big"}}, c), UsageError);
  CHECK_THROWS_AS(apply_json(nlohmann::json{{"graph_mode", "triple"}}, c), UsageError);
  CHECK_THROWS_AS(apply_json(nlohmann::json::array(), c), UsageError);
  c.train.lambda = 1.5;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.ks = {};
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = {};
  c.train.lr_min = 1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("k lists") {
  CHECK(parse_k_list("3,5") == std::vector<std::size_t>{3, 5});
  CHECK(parse_k_list("1") == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(parse_k_list("3,x"), UsageError);
  CHECK_THROWS_AS(parse_k_list("0"), UsageError);
}

TEST_CASE("mode names round trip") {
  for (auto m : {BprMode::Hierarchical, BprMode::UnseenNegative})
    CHECK(parse_bpr_mode(bpr_mode_name(m)) == m);
  CHECK_THROWS_AS(parse_bpr_mode("pairwise"), UsageError);
}
