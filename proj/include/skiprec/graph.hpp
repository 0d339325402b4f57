#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "skiprec/ingest.hpp"
#include "skiprec/sparse.hpp"

namespace skiprec {

/// Which train pairs feed the two propagation paths.
///   Dual:       H pairs on the highly path, L pairs on the less path.
///   Total:      every train pair (H, L and N) on the highly path, less path empty.
///   HighlyOnly: H pairs on the highly path, less path empty.
enum class GraphMode { Dual, Total, HighlyOnly };

std::string_view graph_mode_name(GraphMode mode) noexcept;
GraphMode parse_graph_mode(std::string_view name);

/// Normalized user-by-video block of one bipartite graph and its transpose.
struct GraphPath {
  SparseMatrix user_by_video;
  SparseMatrix video_by_user;
};

struct DualGraphs {
  std::size_t n_users = 0;
  std::size_t n_videos = 0;
  GraphPath highly;
  GraphPath less;
};

/// Binary |U| x |V| matrix with a one for every pair of the requested class.
/// Negative pairs never enter a graph.
SparseMatrix build_interaction_matrix(const std::vector<LabeledPair>& pairs, InteractionClass cls,
                                      std::size_t n_users, std::size_t n_videos);

/// Binary matrix over every pair regardless of class (total-interaction ablation).
SparseMatrix build_total_matrix(const std::vector<LabeledPair>& pairs, std::size_t n_users,
                                std::size_t n_videos);

/// [[0, R], [R^T, 0]] over users followed by videos.
SparseMatrix build_bipartite_adjacency(const SparseMatrix& r);

/// Non-zero count per row.
std::vector<std::size_t> degrees(const SparseMatrix& a);

/// A_ij / sqrt(d_i d_j); isolated nodes keep empty rows.
SparseMatrix symmetric_normalize(const SparseMatrix& a);

/// Top-right |U| x |V| block of a normalized bipartite adjacency, plus its transpose.
GraphPath extract_blocks(const SparseMatrix& a_tilde, std::size_t n_users, std::size_t n_videos);

/// Interaction matrix -> adjacency -> normalization -> block.
GraphPath normalized_path(const SparseMatrix& r);

/// Both propagation graphs from train pairs only.
DualGraphs build_dual_graphs(const std::vector<LabeledPair>& train, std::size_t n_users,
                             std::size_t n_videos, GraphMode mode);

}  // namespace skiprec
