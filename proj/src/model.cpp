#include "skiprec/model.hpp"

#include <cmath>
#include <random>

#include "skiprec/error.hpp"
#include "skiprec/kernels.hpp"

namespace skiprec {

std::string_view feature_mode_name(FeatureMode mode) noexcept {
  return mode == FeatureMode::Fixed ? "fixed" : "learnable";
}

FeatureMode parse_feature_mode(std::string_view name) {
  if (name == "fixed") return FeatureMode::Fixed;
  if (name == "learnable") return FeatureMode::Learnable;
  throw UsageError("unknown feature mode '" + std::string(name) + "'");
}

namespace {

template <typename P, typename M>
std::vector<std::pair<std::string, M*>> list_params(P& p, bool trainable) {
  std::vector<std::pair<std::string, M*>> out;
  if (!trainable || p.mode == FeatureMode::Learnable) out.emplace_back("h_v0", &p.h_v0);
  out.emplace_back("w_h1", &p.w_h1);
  out.emplace_back("w_l1", &p.w_l1);
  out.emplace_back("w_h2", &p.w_h2);
  out.emplace_back("w_l2", &p.w_l2);
  out.emplace_back("w_p1", &p.w_p1);
  out.emplace_back("w_p2", &p.w_p2);
  return out;
}

void fill_uniform(Matrix& m, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& x : m.flat()) x = dist(rng);
}

void glorot(Matrix& m, std::mt19937_64& rng) {
  fill_uniform(m, std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols())), rng);
}

}  // namespace

std::vector<std::pair<std::string, Matrix*>> parameter_list(ModelParams& params, bool trainable) {
  return list_params<ModelParams, Matrix>(params, trainable);
}

std::vector<std::pair<std::string, const Matrix*>> parameter_list(const ModelParams& params,
                                                                  bool trainable) {
  return list_params<const ModelParams, const Matrix>(params, trainable);
}

ModelParams init_params(std::size_t dim, std::size_t n_users, std::size_t n_videos,
                        std::uint64_t seed, FeatureMode mode, const Matrix* features) {
  (void)n_users;
  if (dim == 0) throw UsageError("embedding dimension must be positive");
  ModelParams p;
  p.mode = mode;
  p.dim = dim;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x1u};
  std::mt19937_64 rng(seq);
  if (mode == FeatureMode::Fixed) {
    if (features == nullptr) throw DataError("fixed feature mode requires a feature table");
    if (features->cols() != dim) {
      throw DataError("feature dimension " + std::to_string(features->cols()) +
                      " does not match configured d=" + std::to_string(dim));
    }
    if (features->rows() != n_videos) {
      throw DataError("feature table has " + std::to_string(features->rows()) + " rows, expected " +
                      std::to_string(n_videos));
    }
    p.h_v0 = *features;
  } else {
    p.h_v0 = Matrix(n_videos, dim);
    fill_uniform(p.h_v0, 0.01, rng);
  }
  for (Matrix* w : {&p.w_h1, &p.w_l1, &p.w_h2, &p.w_l2}) {
    *w = Matrix(dim, dim);
    glorot(*w, rng);
  }
  p.w_p1 = Matrix(2 * dim, dim);
  glorot(p.w_p1, rng);
  p.w_p2 = Matrix(dim, 1);
  glorot(p.w_p2, rng);
  return p;
}

namespace {

void relu_inplace(Matrix& m) { kernels::relu(m.flat(), m.flat()); }

Matrix relu_of(const Matrix& pre) {
  Matrix out(pre.rows(), pre.cols());
  kernels::relu(pre.flat(), out.flat());
  return out;
}

void run_path(const SparseMatrix& user_by_video, const SparseMatrix& video_by_user,
              const Matrix& h_v0, const Matrix& w1, const Matrix& w2, bool reuse_input,
              PathTrace& t) {
  if (!reuse_input) t.user_input = spmm(user_by_video, h_v0);
  t.user_pre = matmul(t.user_input, w1);
  t.user_out = relu_of(t.user_pre);
  t.video_input = spmm(video_by_user, t.user_out);
  t.video_pre = matmul(t.video_input, w2);
  t.video_out = relu_of(t.video_pre);
}

}  // namespace

Matrix propagate_user(const SparseMatrix& user_by_video, const Matrix& h_v0, const Matrix& w1) {
  Matrix out = matmul(spmm(user_by_video, h_v0), w1);
  relu_inplace(out);
  return out;
}

Matrix propagate_video(const SparseMatrix& video_by_user, const Matrix& h_u_path,
                       const Matrix& w2) {
  Matrix out = matmul(spmm(video_by_user, h_u_path), w2);
  relu_inplace(out);
  return out;
}

Matrix fuse_mean(const Matrix& x_h, const Matrix& x_l) {
  if (!x_h.same_shape(x_l)) throw DataError("fuse_mean: shape mismatch");
  Matrix out(x_h.rows(), x_h.cols());
  kernels::average(x_h.flat(), x_l.flat(), out.flat());
  return out;
}

void forward_traced(const ModelParams& params, const DualGraphs& graphs, ForwardTrace& trace) {
  if (params.h_v0.rows() != graphs.n_videos) {
    throw DataError("model has " + std::to_string(params.h_v0.rows()) + " videos, graph has " +
                    std::to_string(graphs.n_videos));
  }
  const bool reuse = trace.user_input_cached && params.mode == FeatureMode::Fixed;
  run_path(graphs.highly.user_by_video, graphs.highly.video_by_user, params.h_v0, params.w_h1,
           params.w_h2, reuse, trace.highly);
  run_path(graphs.less.user_by_video, graphs.less.video_by_user, params.h_v0, params.w_l1,
           params.w_l2, reuse, trace.less);
  trace.user_input_cached = params.mode == FeatureMode::Fixed;
  trace.h_u = fuse_mean(trace.highly.user_out, trace.less.user_out);
  trace.h_v = fuse_mean(trace.highly.video_out, trace.less.video_out);
}

Embeddings forward(const ModelParams& params, const DualGraphs& graphs) {
  ForwardTrace trace;
  forward_traced(params, graphs, trace);
  Embeddings e;
  e.h_u_h = std::move(trace.highly.user_out);
  e.h_u_l = std::move(trace.less.user_out);
  e.h_v_h = std::move(trace.highly.video_out);
  e.h_v_l = std::move(trace.less.video_out);
  e.h_u = std::move(trace.h_u);
  e.h_v = std::move(trace.h_v);
  return e;
}

double predict_score(std::span<const double> h_u_row, std::span<const double> h_v_row,
                     const Matrix& w_p1, const Matrix& w_p2) {
  const std::size_t d = h_u_row.size();
  if (h_v_row.size() != d || w_p1.rows() != 2 * d || w_p2.rows() != w_p1.cols() ||
      w_p2.cols() != 1) {
    throw DataError("predict_score: shape mismatch");
  }
  const auto& k = kernels::active();
  std::vector<double> hidden(w_p1.cols(), 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (h_u_row[i] != 0.0) k.axpy(hidden.size(), h_u_row[i], w_p1.row(i).data(), hidden.data());
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (h_v_row[i] != 0.0) {
      k.axpy(hidden.size(), h_v_row[i], w_p1.row(d + i).data(), hidden.data());
    }
  }
  k.relu(hidden.size(), hidden.data(), hidden.data());
  return k.dot(hidden.size(), hidden.data(), w_p2.data());
}

std::vector<double> score_pairs(const Matrix& h_u, const Matrix& h_v, const Matrix& w_p1,
                                const Matrix& w_p2, std::span<const ScoreRequest> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    out.push_back(predict_score(h_u.row(p.user), h_v.row(p.video), w_p1, w_p2));
  }
  return out;
}

}  // namespace skiprec
