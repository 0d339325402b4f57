#include "skiprec/objective.hpp"

#include <cmath>
#include <array>
#include <limits>

#include "skiprec/error.hpp"
#include "skiprec/kernels.hpp"

namespace skiprec {
namespace {

enum Slot : std::size_t { kHighly = 0, kLess = 1, kNegative = 2, kUnseen = 3, kSlots = 4 };

constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

/// One scored (user, video) item with its prediction-layer activations.
struct ScoredItem {
  std::uint32_t user;
  std::uint32_t video;
  int label;
  bool in_bce;
  std::vector<double> input;   // [h_u ; h_v]
  std::vector<double> hidden_pre;
  std::vector<double> hidden;
  double logit = 0.0;
  double dlogit = 0.0;
};

struct ScoredBatch {
  std::vector<ScoredItem> items;
  std::vector<std::array<std::size_t, kSlots>> slots;  // item index per triplet slot
};

void score_item(ScoredItem& item, const Matrix& h_u, const Matrix& h_v, const ModelParams& p) {
  const auto& k = kernels::active();
  const std::size_t d = p.dim;
  item.input.resize(2 * d);
  std::copy_n(h_u.row(item.user).data(), d, item.input.begin());
  std::copy_n(h_v.row(item.video).data(), d, item.input.begin() + d);
  item.hidden_pre.assign(p.w_p1.cols(), 0.0);
  for (std::size_t i = 0; i < 2 * d; ++i) {
    if (item.input[i] != 0.0) {
      k.axpy(item.hidden_pre.size(), item.input[i], p.w_p1.row(i).data(), item.hidden_pre.data());
    }
  }
  item.hidden.resize(item.hidden_pre.size());
  k.relu(item.hidden.size(), item.hidden_pre.data(), item.hidden.data());
  item.logit = k.dot(item.hidden.size(), item.hidden.data(), p.w_p2.data());
}

ScoredBatch score_batch(const Matrix& h_u, const Matrix& h_v, const ModelParams& p,
                        std::span<const Triplet> batch, BprMode mode) {
  ScoredBatch out;
  out.items.reserve(batch.size() * 3);
  auto add = [&](std::uint32_t user, std::uint32_t video, int label, bool in_bce) {
    ScoredItem item{user, video, label, in_bce, {}, {}, {}, 0.0, 0.0};
    score_item(item, h_u, h_v, p);
    out.items.push_back(std::move(item));
    return out.items.size() - 1;
  };
  for (const auto& t : batch) {
    std::array<std::size_t, kSlots> s{kAbsent, kAbsent, kAbsent, kAbsent};
    s[kHighly] = add(t.user, t.highly, 1, true);
    if (t.less) s[kLess] = add(t.user, *t.less, 0, true);
    if (t.negative) s[kNegative] = add(t.user, *t.negative, 0, true);
    if (mode == BprMode::UnseenNegative && t.unseen) s[kUnseen] = add(t.user, *t.unseen, 0, false);
    out.slots.push_back(s);
  }
  return out;
}

/// Fills loss terms and, per item, d(combined)/d(logit).
LossBreakdown accumulate_loss(ScoredBatch& sb, const ObjectiveSettings& settings) {
  LossBreakdown loss;
  auto& items = sb.items;
  double sum_hl = 0.0, sum_hn = 0.0, sum_bce = 0.0;
  for (const auto& s : sb.slots) {
    if (settings.bpr_mode == BprMode::Hierarchical) {
      if (s[kLess] != kAbsent) {
        sum_hl += bpr_pair_loss(items[s[kHighly]].logit, items[s[kLess]].logit);
        ++loss.n_hl;
      }
      if (s[kNegative] != kAbsent) {
        sum_hn += bpr_pair_loss(items[s[kHighly]].logit, items[s[kNegative]].logit);
        ++loss.n_hn;
      }
    } else if (s[kUnseen] != kAbsent) {
      sum_hn += bpr_pair_loss(items[s[kHighly]].logit, items[s[kUnseen]].logit);
      ++loss.n_hn;
    }
  }
  for (const auto& item : items) {
    if (item.in_bce) {
      sum_bce += bce_loss(item.logit, item.label);
      ++loss.n_bce;
    }
  }

  const double lambda = settings.lambda;
  double w_hl = 0.0, w_hn = 0.0;
  if (settings.bpr_mode == BprMode::Hierarchical) {
    loss.bpr_hl = loss.n_hl ? sum_hl / static_cast<double>(loss.n_hl) : 0.0;
    loss.bpr_hn = loss.n_hn ? sum_hn / static_cast<double>(loss.n_hn) : 0.0;
    loss.bpr = 0.5 * (loss.bpr_hl + loss.bpr_hn);
    if (loss.n_hl) w_hl = lambda * 0.5 / static_cast<double>(loss.n_hl);
    if (loss.n_hn) w_hn = lambda * 0.5 / static_cast<double>(loss.n_hn);
  } else {
    // Single BPR term against unseen videos.
    loss.bpr = loss.n_hn ? sum_hn / static_cast<double>(loss.n_hn) : 0.0;
    if (loss.n_hn) w_hn = lambda / static_cast<double>(loss.n_hn);
  }
  loss.bce = loss.n_bce ? sum_bce / static_cast<double>(loss.n_bce) : 0.0;
  loss.combined = combined_loss(loss.bpr, loss.bce, lambda);

  // d/dz_pos softplus(z_neg - z_pos) = -sigmoid(z_neg - z_pos)
  auto pair_grad = [&](std::size_t pos, std::size_t neg, double weight) {
    const double g = sigmoid(items[neg].logit - items[pos].logit) * weight;
    items[pos].dlogit -= g;
    items[neg].dlogit += g;
  };
  for (const auto& s : sb.slots) {
    if (settings.bpr_mode == BprMode::Hierarchical) {
      if (s[kLess] != kAbsent) pair_grad(s[kHighly], s[kLess], w_hl);
      if (s[kNegative] != kAbsent) pair_grad(s[kHighly], s[kNegative], w_hn);
    } else if (s[kUnseen] != kAbsent) {
      pair_grad(s[kHighly], s[kUnseen], w_hn);
    }
  }
  if (loss.n_bce) {
    const double w_bce = (1.0 - lambda) / static_cast<double>(loss.n_bce);
    for (auto& item : items) {
      if (item.in_bce) item.dlogit += w_bce * (sigmoid(item.logit) - item.label);
    }
  }
  return loss;
}

ModelParams zero_like(const ModelParams& p) {
  ModelParams g;
  g.mode = p.mode;
  g.dim = p.dim;
  if (p.mode == FeatureMode::Learnable) g.h_v0 = Matrix(p.h_v0.rows(), p.h_v0.cols());
  g.w_h1 = Matrix(p.w_h1.rows(), p.w_h1.cols());
  g.w_l1 = Matrix(p.w_l1.rows(), p.w_l1.cols());
  g.w_h2 = Matrix(p.w_h2.rows(), p.w_h2.cols());
  g.w_l2 = Matrix(p.w_l2.rows(), p.w_l2.cols());
  g.w_p1 = Matrix(p.w_p1.rows(), p.w_p1.cols());
  g.w_p2 = Matrix(p.w_p2.rows(), p.w_p2.cols());
  return g;
}

void masked(Matrix& grad, const Matrix& pre) { kernels::relu_backward(pre.flat(), grad.flat()); }

void add_into(Matrix& dst, const Matrix& src) { kernels::axpy(1.0, src.flat(), dst.flat()); }

/// Backpropagates d(loss)/d(path user output) and d(loss)/d(path video output).
void backward_path(const PathTrace& t, const GraphPath& graph, const Matrix& w1, const Matrix& w2,
                   Matrix d_user_out, Matrix d_video_out, Matrix& g_w1, Matrix& g_w2,
                   Matrix* g_h_v0) {
  masked(d_video_out, t.video_pre);
  g_w2 = matmul_tn(t.video_input, d_video_out);
  const Matrix d_video_input = matmul_nt(d_video_out, w2);
  add_into(d_user_out, spmm(graph.user_by_video, d_video_input));
  masked(d_user_out, t.user_pre);
  g_w1 = matmul_tn(t.user_input, d_user_out);
  if (g_h_v0 != nullptr) {
    add_into(*g_h_v0, spmm(graph.video_by_user, matmul_nt(d_user_out, w1)));
  }
}

void check_finite(const ModelParams& g) {
  for (const auto& [name, m] : parameter_list(g, true)) {
    for (double x : m->flat()) {
      if (!std::isfinite(x)) throw NumericalError("non-finite gradient in " + name);
    }
  }
}

}  // namespace

LossBreakdown batch_loss(const ModelParams& params, const DualGraphs& graphs,
                         std::span<const Triplet> batch, const ObjectiveSettings& settings) {
  ForwardTrace trace;
  forward_traced(params, graphs, trace);
  auto sb = score_batch(trace.h_u, trace.h_v, params, batch, settings.bpr_mode);
  return accumulate_loss(sb, settings);
}

BatchGradients backward(const ModelParams& params, const DualGraphs& graphs,
                        std::span<const Triplet> batch, const ObjectiveSettings& settings,
                        ForwardTrace& trace) {
  forward_traced(params, graphs, trace);
  auto sb = score_batch(trace.h_u, trace.h_v, params, batch, settings.bpr_mode);

  BatchGradients out;
  out.loss = accumulate_loss(sb, settings);
  out.grads = zero_like(params);
  auto& g = out.grads;
  const auto& k = kernels::active();
  const std::size_t d = params.dim;

  Matrix d_h_u(trace.h_u.rows(), d);
  Matrix d_h_v(trace.h_v.rows(), d);
  std::vector<double> d_hidden(params.w_p1.cols());
  for (const auto& item : sb.items) {
    if (item.dlogit == 0.0) continue;
    k.axpy(item.hidden.size(), item.dlogit, item.hidden.data(), g.w_p2.data());
    for (std::size_t j = 0; j < d_hidden.size(); ++j) {
      d_hidden[j] = item.hidden_pre[j] > 0.0 ? item.dlogit * params.w_p2(j, 0) : 0.0;
    }
    double* du = d_h_u.row(item.user).data();
    double* dv = d_h_v.row(item.video).data();
    for (std::size_t i = 0; i < 2 * d; ++i) {
      if (item.input[i] != 0.0) {
        k.axpy(d_hidden.size(), item.input[i], d_hidden.data(), g.w_p1.row(i).data());
      }
      const double dx = k.dot(d_hidden.size(), params.w_p1.row(i).data(), d_hidden.data());
      if (i < d) {
        du[i] += dx;
      } else {
        dv[i - d] += dx;
      }
    }
  }

  // Mean fusion splits every upstream gradient evenly between the paths.
  Matrix half_u(d_h_u.rows(), d);
  Matrix half_v(d_h_v.rows(), d);
  kernels::axpy(0.5, d_h_u.flat(), half_u.flat());
  kernels::axpy(0.5, d_h_v.flat(), half_v.flat());

  Matrix* g_h_v0 = params.mode == FeatureMode::Learnable ? &g.h_v0 : nullptr;
  backward_path(trace.highly, graphs.highly, params.w_h1, params.w_h2, half_u, half_v, g.w_h1,
                g.w_h2, g_h_v0);
  backward_path(trace.less, graphs.less, params.w_l1, params.w_l2, std::move(half_u),
                std::move(half_v), g.w_l1, g.w_l2, g_h_v0);
  check_finite(g);
  return out;
}

}  // namespace skiprec
