#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skiprec/graph.hpp"
#include "skiprec/matrix.hpp"

namespace skiprec {

/// Fixed: initial video embeddings are the supplied visual features and are
/// never updated. Learnable: they are free parameters.
enum class FeatureMode { Fixed, Learnable };

std::string_view feature_mode_name(FeatureMode mode) noexcept;
FeatureMode parse_feature_mode(std::string_view name);

/// Nonlinearity of the graph layers and of the prediction hidden layer.
inline constexpr std::string_view kActivationName = "relu";

struct ModelParams {
  FeatureMode mode = FeatureMode::Fixed;
  std::size_t dim = 0;
  Matrix h_v0;  // |V| x d initial video embeddings
  Matrix w_h1;  // d x d, first hop, highly path
  Matrix w_l1;  // d x d, first hop, less path
  Matrix w_h2;  // d x d, second hop, highly path
  Matrix w_l2;  // d x d, second hop, less path
  Matrix w_p1;  // 2d x d, prediction hidden layer
  Matrix w_p2;  // d x 1, prediction output

  bool operator==(const ModelParams&) const = default;
};

/// Named views over every matrix; `trainable` excludes h_v0 in fixed mode.
std::vector<std::pair<std::string, Matrix*>> parameter_list(ModelParams& params, bool trainable);
std::vector<std::pair<std::string, const Matrix*>> parameter_list(const ModelParams& params,
                                                                  bool trainable);

/// Glorot-uniform weights; learnable embeddings ~ U(-0.01, 0.01).
ModelParams init_params(std::size_t dim, std::size_t n_users, std::size_t n_videos,
                        std::uint64_t seed, FeatureMode mode, const Matrix* features = nullptr);

struct Embeddings {
  Matrix h_u_h;
  Matrix h_u_l;
  Matrix h_v_h;
  Matrix h_v_l;
  Matrix h_u;
  Matrix h_v;
};

/// relu(R * H_v0 * W1): one row per user.
Matrix propagate_user(const SparseMatrix& user_by_video, const Matrix& h_v0, const Matrix& w1);
/// relu(R^T * H_u * W2): one row per video.
Matrix propagate_video(const SparseMatrix& video_by_user, const Matrix& h_u_path, const Matrix& w2);
Matrix fuse_mean(const Matrix& x_h, const Matrix& x_l);

/// Intermediate products of one propagation path, kept for backpropagation.
struct PathTrace {
  Matrix user_input;  // R * H_v0
  Matrix user_pre;    // R * H_v0 * W1
  Matrix user_out;
  Matrix video_input;  // R^T * H_u_path
  Matrix video_pre;
  Matrix video_out;
};

struct ForwardTrace {
  PathTrace highly;
  PathTrace less;
  Matrix h_u;
  Matrix h_v;
  // In fixed mode R * H_v0 does not change between steps and is kept.
  bool user_input_cached = false;
};

/// Full two-hop forward pass recording intermediates.
void forward_traced(const ModelParams& params, const DualGraphs& graphs, ForwardTrace& trace);

Embeddings forward(const ModelParams& params, const DualGraphs& graphs);

/// Raw preference logit w_p2 . relu(w_p1^T [h_u ; h_v]). No output sigmoid.
double predict_score(std::span<const double> h_u_row, std::span<const double> h_v_row,
                     const Matrix& w_p1, const Matrix& w_p2);

struct ScoreRequest {
  std::uint32_t user;
  std::uint32_t video;
};

std::vector<double> score_pairs(const Matrix& h_u, const Matrix& h_v, const Matrix& w_p1,
                                const Matrix& w_p2, std::span<const ScoreRequest> pairs);

}  // namespace skiprec
