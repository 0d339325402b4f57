#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "skiprec/model.hpp"

namespace skiprec {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  int version = kCheckpointVersion;
  nlohmann::json config;  // flat run configuration snapshot
  std::string activation{kActivationName};
  std::size_t n_users = 0;
  ModelParams params;
};

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Checkpoint& c);
/// Throws DataError on a wrong version, unknown activation or malformed content.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace skiprec
