#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace skiprec {

/// ln(1 + e^x) without overflow.
inline double softplus(double x) noexcept { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

/// Logistic function, evaluated on the side that cannot overflow.
inline double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// -ln sigmoid(z_pos - z_neg)
inline double bpr_pair_loss(double z_pos, double z_neg) noexcept { return softplus(z_neg - z_pos); }

/// -[y ln sigmoid(z) + (1 - y) ln(1 - sigmoid(z))]
inline double bce_loss(double z, int y) noexcept { return y != 0 ? softplus(-z) : softplus(z); }

inline double combined_loss(double bpr, double bce, double lambda) noexcept {
  return lambda * bpr + (1.0 - lambda) * bce;
}

struct LossBreakdown {
  double bpr_hl = 0.0;
  double bpr_hn = 0.0;
  double bpr = 0.0;
  double bce = 0.0;
  double combined = 0.0;
  // Counts of present pairs behind each term; zero means the term was absent.
  std::size_t n_hl = 0;
  std::size_t n_hn = 0;
  std::size_t n_bce = 0;
};

struct HierarchicalBpr {
  double bpr_hl = 0.0;
  double bpr_hn = 0.0;
  double bpr = 0.0;
  bool hl_missing = false;
  bool hn_missing = false;
};

/// Logits of one triplet; absent partners are NaN.
struct TripletLogits {
  double highly;
  double less;
  double negative;
};

/// Per-term means over present pairs, then the average of the two terms.
/// A term without any present pair contributes zero and is flagged.
HierarchicalBpr hierarchical_bpr(std::span<const TripletLogits> logits);

}  // namespace skiprec
