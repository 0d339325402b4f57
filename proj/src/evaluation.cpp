#include "skiprec/evaluation.hpp"

#include <cmath>
#include <map>

#include "skiprec/error.hpp"

namespace skiprec {

double MetricsReport::mean(Metric metric, std::size_t k) const {
  for (const auto& v : values) {
    if (v.metric == metric && v.k == k) return v.mean;
  }
  throw UsageError("metric " + std::string(metric_name(metric)) + "@" + std::to_string(k) +
                   " not in report");
}

std::vector<RankedList> rank_users(const Matrix& h_u, const Matrix& h_v, const ModelParams& params,
                                   const std::vector<LabeledPair>& pairs, bool include_less) {
  std::map<std::uint32_t, std::vector<Candidate>> by_user;
  for (const auto& p : pairs) {
    const bool relevant = p.cls == InteractionClass::HighlyPositive ||
                          (include_less && p.cls == InteractionClass::LessPositive);
    const double logit = predict_score(h_u.row(p.user), h_v.row(p.video), params.w_p1, params.w_p2);
    by_user[p.user].push_back({p.video, logit, relevant});
  }
  std::vector<RankedList> out;
  out.reserve(by_user.size());
  for (auto& [user, cands] : by_user) out.push_back(rank_user(user, std::move(cands)));
  return out;
}

MetricsReport summarize(const std::vector<RankedList>& lists, const std::vector<std::size_t>& ks) {
  MetricsReport report;
  std::vector<const RankedList*> eligible;
  for (const auto& l : lists) {
    if (l.n_relevant() > 0) {
      eligible.push_back(&l);
    } else {
      ++report.users_excluded;
    }
  }
  if (eligible.empty()) throw DataError("no user has a relevant candidate to evaluate");
  report.users_evaluated = eligible.size();
  const double n = static_cast<double>(eligible.size());
  for (auto metric : kAllMetrics) {
    for (auto k : ks) {
      double sum = 0.0;
      std::vector<double> per_user;
      per_user.reserve(eligible.size());
      for (const auto* l : eligible) {
        per_user.push_back(metric_at_k(metric, *l, k));
        sum += per_user.back();
      }
      const double mean = sum / n;
      double ss = 0.0;
      for (double v : per_user) ss += (v - mean) * (v - mean);
      const double sd = eligible.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      report.values.push_back({metric, k, mean, sd});
    }
  }
  return report;
}

MetricsReport evaluate(const ModelParams& params, const DualGraphs& graphs,
                       const std::vector<LabeledPair>& pairs, const std::vector<std::size_t>& ks,
                       bool include_less) {
  const auto emb = forward(params, graphs);
  return summarize(rank_users(emb.h_u, emb.h_v, params, pairs, include_less), ks);
}

}  // namespace skiprec
