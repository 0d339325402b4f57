#include "skiprec/losses.hpp"

namespace skiprec {

HierarchicalBpr hierarchical_bpr(std::span<const TripletLogits> logits) {
  double sum_hl = 0.0;
  double sum_hn = 0.0;
  std::size_t n_hl = 0;
  std::size_t n_hn = 0;
  for (const auto& t : logits) {
    if (!std::isnan(t.less)) {
      sum_hl += bpr_pair_loss(t.highly, t.less);
      ++n_hl;
    }
    if (!std::isnan(t.negative)) {
      sum_hn += bpr_pair_loss(t.highly, t.negative);
      ++n_hn;
    }
  }
  HierarchicalBpr out;
  out.hl_missing = n_hl == 0;
  out.hn_missing = n_hn == 0;
  out.bpr_hl = n_hl ? sum_hl / static_cast<double>(n_hl) : 0.0;
  out.bpr_hn = n_hn ? sum_hn / static_cast<double>(n_hn) : 0.0;
  out.bpr = 0.5 * (out.bpr_hl + out.bpr_hn);
  return out;
}

}  // namespace skiprec
