#include <random>

#include "doctest.h"
#include "skiprec/adamw.hpp"
#include "skiprec/commands.hpp"
#include "skiprec/error.hpp"
#include "skiprec/evaluation.hpp"
#include "skiprec/synth.hpp"
#include "skiprec/trainer.hpp"

using namespace skiprec;

namespace {

struct Fixture {
  PreparedData data;
  DualGraphs graphs;
  TrainConfig config;
  ModelParams init;
};

Fixture make_fixture(GraphMode mode = GraphMode::Dual) {
  SynthConfig sc;
  sc.n_users = 120;
  sc.n_videos = 90;
  sc.interactions_per_user = 20;
  sc.feature_dim = 8;
  sc.seed = 4;
  const auto synth = generate(sc);
  Fixture f;
  f.data = prepare_data(synth.interactions, 5.0, 1);
  f.config.dim = 8;
  f.config.batch_size = 256;
  f.config.max_epochs = 6;
  f.config.feature_mode = FeatureMode::Learnable;
  f.config.graph_mode = mode;
  f.config.seed = 3;
  f.graphs = build_dual_graphs(f.data.split.train, f.data.ids.users.size(),
                               f.data.ids.videos.size(), mode);
  f.init = init_params(8, f.data.ids.users.size(), f.data.ids.videos.size(), 3,
                       FeatureMode::Learnable);
  return f;
}

}  // namespace

TEST_CASE("training is deterministic for a fixed seed") {
  const auto f = make_fixture();
  const auto a = train(f.config, f.data.split, f.graphs, f.init);
  const auto b = train(f.config, f.data.split, f.graphs, f.init);
  CHECK(a.history == b.history);
  CHECK(a.params == b.params);
  CHECK_FALSE(a.history.empty());
  auto c = f.config;
  c.bpr_mode = BprMode::UnseenNegative;
  CHECK(train(c, f.data.split, f.graphs, f.init).history ==
        train(c, f.data.split, f.graphs, f.init).history);
}

TEST_CASE("zero epochs return the initial parameters") {
  auto f = make_fixture();
  f.config.max_epochs = 0;
  const auto r = train(f.config, f.data.split, f.graphs, f.init);
  CHECK(r.params == f.init);
  CHECK(r.history.empty());
  CHECK(r.best_epoch == 0);
}

TEST_CASE("the returned parameters are the best validation snapshot") {
  for (std::size_t patience : {1, 2, 5}) {
    auto f = make_fixture();
    f.config.max_epochs = 20;
    f.config.patience = patience;
    std::vector<EpochRecord> seen;
    const auto r = train(f.config, f.data.split, f.graphs, f.init,
                         [&](const EpochRecord& e) { seen.push_back(e); });
    CHECK(seen == r.history);
    REQUIRE(r.best_epoch >= 1);
    std::size_t best = 0;
    for (std::size_t i = 0; i < r.history.size(); ++i)
      if (r.history[i].val_recall > r.history[best].val_recall) best = i;
    CHECK(r.best_epoch == best + 1);
    CHECK(r.best_val_recall == r.history[best].val_recall);
    if (r.stopped_early) CHECK(r.history.size() == r.best_epoch + patience);
    const auto rep = evaluate(r.params, f.graphs, f.data.split.validation, {3});
    CHECK(rep.mean(Metric::Recall, 3) == doctest::Approx(r.best_val_recall).epsilon(1e-12));
    CHECK(r.total_steps == f.config.max_epochs * r.batches_per_epoch);
  }
}

TEST_CASE("schedule runs from lr0 toward lr_min") {
  auto f = make_fixture();
  f.config.max_epochs = 4;
  f.config.patience = 10;
  const auto r = train(f.config, f.data.split, f.graphs, f.init);
  REQUIRE(r.history.size() == 4);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i].lr < r.history[i - 1].lr);
  CHECK(r.history.back().lr == doctest::Approx(cosine_lr(r.total_steps - 1, r.total_steps, 1e-3, 1e-6)));
}

TEST_CASE("training needs highly positive pairs") {
  auto f = make_fixture();
  DatasetSplit empty = f.data.split;
  std::erase_if(empty.train, [](const LabeledPair& p) { return p.cls == InteractionClass::HighlyPositive; });
  CHECK_THROWS_AS(train(f.config, empty, f.graphs, f.init), DataError);
}

TEST_CASE("fixed features are never updated") {
  auto f = make_fixture();
  std::mt19937_64 rng(1);
  Matrix feats(f.data.ids.videos.size(), 8);
  std::normal_distribution<double> nd;
  for (auto& x : feats.flat()) x = nd(rng);
  const auto p = init_params(8, f.data.ids.users.size(), f.data.ids.videos.size(), 3,
                             FeatureMode::Fixed, &feats);
  f.config.feature_mode = FeatureMode::Fixed;
  f.config.max_epochs = 2;
  const auto r = train(f.config, f.data.split, f.graphs, p);
  CHECK(r.params.h_v0 == feats);
  CHECK(r.params.w_h1 != p.w_h1);
}
