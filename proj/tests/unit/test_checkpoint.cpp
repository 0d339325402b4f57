#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "skiprec/checkpoint.hpp"
#include "skiprec/config.hpp"
#include "skiprec/error.hpp"

using namespace skiprec;
namespace fs = std::filesystem;

namespace {

Checkpoint sample(FeatureMode mode) {
  std::mt19937_64 rng(5);
  const auto feats = testutil::random_matrix(6, 3, rng, -1e3, 1e3);
  Checkpoint c;
  c.params = init_params(3, 4, 6, 9, mode, &feats);
  c.params.w_p2(1, 0) = 0.1 + 0.2;  // not exactly representable in short form
  c.params.w_h1(0, 0) = 5e-324;
  c.n_users = 4;
  c.config = to_json(TrainConfig{});
  return c;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "skiprec_checkpoint_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("save then load is bitwise lossless") {
  for (auto mode : {FeatureMode::Fixed, FeatureMode::Learnable}) {
    const auto c = sample(mode);
    const auto path = scratch("ck.json");
    save_checkpoint(path, c);
    const auto back = load_checkpoint(path);
    CHECK(back.params == c.params);
    CHECK(back.config == c.config);
    CHECK(back.n_users == 4);
    CHECK(back.activation == "relu");
  }
}

TEST_CASE("version, activation and shape are verified") {
  auto j = to_json(sample(FeatureMode::Fixed));
  auto bad = j;
  bad["format_version"] = 2;
  CHECK_THROWS_AS(checkpoint_from_json(bad), DataError);
  bad = j;
  bad["activation"] = "tanh";
  CHECK_THROWS_AS(checkpoint_from_json(bad), DataError);
  bad = j;
  bad["matrices"]["w_p1"]["rows"] = 5;
  CHECK_THROWS_AS(checkpoint_from_json(bad), DataError);
  bad = j;
  bad["matrices"].erase("w_l2");
  CHECK_THROWS_AS(checkpoint_from_json(bad), DataError);
  bad = j;
  bad["dim"] = 4;
  CHECK_THROWS_AS(checkpoint_from_json(bad), DataError);
}

TEST_CASE("corrupted files are data errors") {
  const auto path = scratch("broken.json");
  save_checkpoint(path, sample(FeatureMode::Learnable));
  {
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    std::ofstream out(path, std::ios::trunc);
    out << text.substr(0, text.size() / 2);
  }
  CHECK_THROWS_AS(load_checkpoint(path), DataError);
  CHECK_THROWS_AS(load_checkpoint(scratch("missing.json")), DataError);
}
