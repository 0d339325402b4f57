#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "skiprec/commands.hpp"
#include "skiprec/error.hpp"

using namespace skiprec;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "skiprec_commands_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

SynthConfig small_synth() {
  SynthConfig c;
  c.n_users = 80;
  c.n_videos = 60;
  c.interactions_per_user = 15;
  c.feature_dim = 8;
  c.seed = 2;
  return c;
}

RunConfig small_run(const fs::path& base) {
  RunConfig rc;
  rc.interactions_path = (base / "data" / "interactions.csv").string();
  rc.features_path = (base / "data" / "features.csv").string();
  rc.train.dim = 8;
  rc.train.max_epochs = 3;
  rc.train.batch_size = 128;
  return rc;
}

}  // namespace

TEST_CASE("split manifest round trip") {
  const auto synth = generate(small_synth());
  const auto data = prepare_data(synth.interactions, 5.0, 7);
  std::stringstream buf;
  write_split_manifest(buf, data);
  const auto back = read_split_manifest(buf);
  CHECK(back.ids.users.ids() == data.ids.users.ids());
  CHECK(back.ids.videos.ids() == data.ids.videos.ids());
  CHECK(back.split.train == data.split.train);
  CHECK(back.split.validation == data.split.validation);
  CHECK(back.split.test == data.split.test);

  std::stringstream bad("user_id,video_id,user_index,video_index,class,split\nu0,v0,0,0,H,train\nu1,v0,0,0,L,test\n");
  CHECK_THROWS_AS(read_split_manifest(bad), DataError);
}

TEST_CASE("prepare, train and evaluate on disk") {
  const auto base = fresh_dir("pipeline");
  cmd_synth(small_synth(), base / "data");
  auto rc = small_run(base);
  rc.out_dir = (base / "prep").string();
  const auto prep = cmd_prepare(rc);
  CHECK(fs::exists(base / "prep" / "split.csv"));
  CHECK(fs::exists(base / "prep" / "stats.json"));
  CHECK(prep.stats["n_users"] == 80);
  const auto manifest = slurp(base / "prep" / "split.csv");
  cmd_prepare(rc);
  CHECK(slurp(base / "prep" / "split.csv") == manifest);

  rc.split_dir = rc.out_dir;
  rc.out_dir = (base / "train").string();
  const auto tr = cmd_train(rc);
  CHECK(fs::exists(base / "train" / "checkpoint.json"));
  std::ifstream hist(base / "train" / "history.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(hist, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("val_recall@3"));
    ++lines;
  }
  CHECK(lines == tr.history.size());

  const auto rep = cmd_evaluate(base / "train" / "checkpoint.json", base / "prep", {3, 5},
                                base / "eval");
  CHECK(rep.values.size() == 8);
  CHECK(fs::exists(base / "eval" / "metrics.json"));
  const auto one = cmd_evaluate(base / "train" / "checkpoint.json", base / "prep", {1},
                                base / "eval1");
  CHECK(one.values.size() == 4);

  {
    std::ofstream broken(base / "train" / "checkpoint.json", std::ios::trunc);
    broken << "{\"format_version\": 1, \"matrices\": ";
  }
  CHECK_THROWS_AS(cmd_evaluate(base / "train" / "checkpoint.json", base / "prep", {3}, base / "e2"),
                  DataError);
}

TEST_CASE("fixed mode without features is an error") {
  const auto base = fresh_dir("nofeat");
  cmd_synth(small_synth(), base / "data");
  auto rc = small_run(base);
  rc.features_path.clear();
  rc.out_dir = (base / "prep").string();
  CHECK_THROWS_AS(cmd_prepare(rc), DataError);
  rc.train.feature_mode = FeatureMode::Learnable;
  CHECK_NOTHROW(cmd_prepare(rc));
}

TEST_CASE("experiment writes per-variant results and paired tests") {
  const auto base = fresh_dir("experiment");
  cmd_synth(small_synth(), base / "data");
  auto rc = small_run(base);
  rc.out_dir = (base / "exp").string();
  rc.repeats = 2;
  rc.variants = {"dual", "total", "highly_only"};
  const auto r = cmd_experiment(rc);
  CHECK(r.seeds == std::vector<std::uint64_t>{0, 1});
  CHECK(r.comparisons.size() == 2 * 8);
  CHECK(r.series("total", Metric::Recall, 5).size() == 2);
  CHECK(fs::exists(base / "exp" / "dual" / "1" / "checkpoint.json"));
  CHECK(fs::exists(base / "exp" / "summary.json"));

  std::ifstream csv(base / "exp" / "metrics.csv");
  const auto rows = ttest_from_metrics(csv, "dual", "total");
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    const auto a = r.series("dual", row.metric, row.k);
    const auto b = r.series("total", row.metric, row.k);
    CHECK(row.test.p == doctest::Approx(paired_t_test(a, b).p).epsilon(1e-12));
  }

  rc.repeats = 1;
  CHECK_THROWS_AS(cmd_experiment(rc), UsageError);
  rc.repeats = 2;
  rc.variants = {"dual"};
  CHECK_THROWS_AS(cmd_experiment(rc), UsageError);
  rc.variants = {"dual", "quad"};
  CHECK_THROWS_AS(cmd_experiment(rc), UsageError);
}

TEST_CASE("variants map to graph and loss modes") {
  CHECK(apply_variant({}, "total").graph_mode == GraphMode::Total);
  CHECK(apply_variant({}, "highly_only").graph_mode == GraphMode::HighlyOnly);
  const auto u = apply_variant({}, "unseen_negative");
  CHECK(u.bpr_mode == BprMode::UnseenNegative);
  CHECK(u.graph_mode == GraphMode::Dual);
}

TEST_CASE("metrics csv format") {
  MetricsReport r;
  r.variant = "dual";
  r.seed = 3;
  r.values = {{Metric::Recall, 5, 0.25, 0.1}};
  std::ostringstream out;
  write_metrics_csv(out, {r});
  CHECK(out.str() == "variant,seed,metric,k,value\ndual,3,recall,5,0.25\n");
}
