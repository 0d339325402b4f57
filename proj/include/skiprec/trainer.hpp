#pragma once

#include <functional>
#include <vector>

#include "json.hpp"
#include "skiprec/config.hpp"
#include "skiprec/graph.hpp"
#include "skiprec/ingest.hpp"
#include "skiprec/losses.hpp"
#include "skiprec/model.hpp"

namespace skiprec {

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double lr = 0.0;        // rate used by the epoch's last step
  double loss = 0.0;      // batch means of each term, averaged over the epoch
  double bpr_hl = 0.0;
  double bpr_hn = 0.0;
  double bpr = 0.0;
  double bce = 0.0;
  double val_recall = 0.0;  // recall@early_stop_k on the validation pairs
  std::size_t unseen_skipped = 0;

  bool operator==(const EpochRecord&) const = default;
};

/// One JSON line: {epoch, lr, loss, bpr_hl, bpr_hn, bpr, bce, val_recall@k}.
nlohmann::json to_json(const EpochRecord& r, std::size_t k);

struct TrainResult {
  ModelParams params;  // best-validation snapshot
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  double best_val_recall = 0.0;
  bool stopped_early = false;
  std::size_t total_steps = 0;  // cosine schedule length
  std::size_t batches_per_epoch = 0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch AdamW over freshly sampled triplets each epoch, cosine-decayed
/// learning rate over max_epochs * batches_per_epoch steps, validation
/// recall after every epoch and early stopping after `patience` epochs
/// without strict improvement.
TrainResult train(const TrainConfig& config, const DatasetSplit& split, const DualGraphs& graphs,
                  ModelParams params, const EpochCallback& on_epoch = {});

}  // namespace skiprec
