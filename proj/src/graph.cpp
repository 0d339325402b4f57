#include "skiprec/graph.hpp"

#include <cmath>
#include <string>

#include "skiprec/error.hpp"

namespace skiprec {

std::string_view graph_mode_name(GraphMode mode) noexcept {
  switch (mode) {
    case GraphMode::Dual: return "dual";
    case GraphMode::Total: return "total";
    case GraphMode::HighlyOnly: return "highly_only";
  }
  return "?";
}

GraphMode parse_graph_mode(std::string_view name) {
  if (name == "dual") return GraphMode::Dual;
  if (name == "total") return GraphMode::Total;
  if (name == "highly_only") return GraphMode::HighlyOnly;
  throw UsageError("unknown graph mode '" + std::string(name) + "'");
}

SparseMatrix build_interaction_matrix(const std::vector<LabeledPair>& pairs, InteractionClass cls,
                                      std::size_t n_users, std::size_t n_videos) {
  if (cls == InteractionClass::Negative) {
    throw UsageError("negative interactions do not form a propagation graph");
  }
  std::vector<SparseEntry> entries;
  for (const auto& p : pairs) {
    if (p.cls == cls) entries.push_back({p.user, p.video, 1.0});
  }
  return SparseMatrix::from_entries(n_users, n_videos, std::move(entries));
}

SparseMatrix build_total_matrix(const std::vector<LabeledPair>& pairs, std::size_t n_users,
                                std::size_t n_videos) {
  std::vector<SparseEntry> entries;
  entries.reserve(pairs.size());
  for (const auto& p : pairs) entries.push_back({p.user, p.video, 1.0});
  return SparseMatrix::from_entries(n_users, n_videos, std::move(entries));
}

SparseMatrix build_bipartite_adjacency(const SparseMatrix& r) {
  const auto n_users = static_cast<std::uint32_t>(r.rows());
  std::vector<SparseEntry> entries;
  entries.reserve(2 * r.nnz());
  for (const auto& e : r.entries()) {
    entries.push_back({e.row, n_users + e.col, e.value});
    entries.push_back({n_users + e.col, e.row, e.value});
  }
  const std::size_t n = r.rows() + r.cols();
  return SparseMatrix::from_entries(n, n, std::move(entries));
}

std::vector<std::size_t> degrees(const SparseMatrix& a) {
  std::vector<std::size_t> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = a.row_nnz(r);
  return out;
}

SparseMatrix symmetric_normalize(const SparseMatrix& a) {
  const auto deg = degrees(a);
  std::vector<SparseEntry> entries;
  entries.reserve(a.nnz());
  for (const auto& e : a.entries()) {
    // Stored entries imply both endpoints have degree >= 1.
    const double scale = std::sqrt(static_cast<double>(deg[e.row]) * static_cast<double>(deg[e.col]));
    entries.push_back({e.row, e.col, e.value / scale});
  }
  return SparseMatrix::from_entries(a.rows(), a.cols(), std::move(entries));
}

GraphPath extract_blocks(const SparseMatrix& a_tilde, std::size_t n_users, std::size_t n_videos) {
  if (a_tilde.rows() != n_users + n_videos || a_tilde.cols() != n_users + n_videos) {
    throw DataError("adjacency shape does not match |U| + |V|");
  }
  std::vector<SparseEntry> entries;
  for (std::size_t r = 0; r < n_users; ++r) {
    const auto cols = a_tilde.row_cols(r);
    const auto vals = a_tilde.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] >= n_users) {
        entries.push_back({static_cast<std::uint32_t>(r),
                           static_cast<std::uint32_t>(cols[k] - n_users), vals[k]});
      }
    }
  }
  GraphPath path;
  path.user_by_video = SparseMatrix::from_entries(n_users, n_videos, std::move(entries));
  path.video_by_user = path.user_by_video.transpose();
  return path;
}

GraphPath normalized_path(const SparseMatrix& r) {
  return extract_blocks(symmetric_normalize(build_bipartite_adjacency(r)), r.rows(), r.cols());
}

DualGraphs build_dual_graphs(const std::vector<LabeledPair>& train, std::size_t n_users,
                             std::size_t n_videos, GraphMode mode) {
  DualGraphs g;
  g.n_users = n_users;
  g.n_videos = n_videos;
  const SparseMatrix empty(n_users, n_videos);
  switch (mode) {
    case GraphMode::Dual:
      g.highly = normalized_path(
          build_interaction_matrix(train, InteractionClass::HighlyPositive, n_users, n_videos));
      g.less = normalized_path(
          build_interaction_matrix(train, InteractionClass::LessPositive, n_users, n_videos));
      break;
    case GraphMode::Total:
      g.highly = normalized_path(build_total_matrix(train, n_users, n_videos));
      g.less = normalized_path(empty);
      break;
    case GraphMode::HighlyOnly:
      g.highly = normalized_path(
          build_interaction_matrix(train, InteractionClass::HighlyPositive, n_users, n_videos));
      g.less = normalized_path(empty);
      break;
  }
  return g;
}

}  // namespace skiprec
