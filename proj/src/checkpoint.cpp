#include "skiprec/checkpoint.hpp"

#include <cmath>
#include <fstream>

#include "skiprec/error.hpp"

namespace skiprec {

nlohmann::json to_json(const Matrix& m) {
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"data", std::vector<double>(m.flat().begin(), m.flat().end())}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const auto& data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw DataError("matrix payload does not match its shape");
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = data[i].get<double>();
    if (!std::isfinite(v)) throw DataError("non-finite value in matrix payload");
    m.flat()[i] = v;
  }
  return m;
}

nlohmann::json to_json(const Checkpoint& c) {
  nlohmann::json matrices = nlohmann::json::object();
  for (const auto& [name, m] : parameter_list(c.params, false)) matrices[name] = to_json(*m);
  return {{"format_version", c.version},
          {"activation", c.activation},
          {"feature_mode", feature_mode_name(c.params.mode)},
          {"dim", c.params.dim},
          {"n_users", c.n_users},
          {"n_videos", c.params.h_v0.rows()},
          {"config", c.config},
          {"matrices", matrices}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    Checkpoint c;
    c.version = j.at("format_version").get<int>();
    if (c.version != kCheckpointVersion) {
      throw DataError("checkpoint format version " + std::to_string(c.version) +
                      " is not supported (expected " + std::to_string(kCheckpointVersion) + ")");
    }
    c.activation = j.at("activation").get<std::string>();
    if (c.activation != kActivationName) {
      throw DataError("unsupported activation '" + c.activation + "'");
    }
    c.config = j.at("config");
    c.n_users = j.at("n_users").get<std::size_t>();
    c.params.mode = parse_feature_mode(j.at("feature_mode").get<std::string>());
    c.params.dim = j.at("dim").get<std::size_t>();
    const auto& matrices = j.at("matrices");
    for (auto& [name, m] : parameter_list(c.params, false)) *m = matrix_from_json(matrices.at(name));

    const std::size_t d = c.params.dim;
    const auto n_videos = j.at("n_videos").get<std::size_t>();
    auto expect = [](const Matrix& m, std::size_t r, std::size_t cols, const char* name) {
      if (m.rows() != r || m.cols() != cols) {
        throw DataError(std::string("checkpoint matrix ") + name + " has the wrong shape");
      }
    };
    expect(c.params.h_v0, n_videos, d, "h_v0");
    expect(c.params.w_h1, d, d, "w_h1");
    expect(c.params.w_l1, d, d, "w_l1");
    expect(c.params.w_h2, d, d, "w_h2");
    expect(c.params.w_l2, d, d, "w_l2");
    expect(c.params.w_p1, 2 * d, d, "w_p1");
    expect(c.params.w_p2, d, 1, "w_p2");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupted checkpoint: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("corrupted checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << to_json(c).dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupted checkpoint " + path.string() + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace skiprec
