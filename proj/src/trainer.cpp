#include "skiprec/trainer.hpp"

#include <algorithm>
#include <random>

#include "skiprec/adamw.hpp"
#include "skiprec/error.hpp"
#include "skiprec/evaluation.hpp"
#include "skiprec/objective.hpp"
#include "skiprec/sampling.hpp"

namespace skiprec {

nlohmann::json to_json(const EpochRecord& r, std::size_t k) {
  return {{"epoch", r.epoch},   {"lr", r.lr},   {"loss", r.loss},
          {"bpr_hl", r.bpr_hl}, {"bpr_hn", r.bpr_hn}, {"bpr", r.bpr}, {"bce", r.bce},
          {"val_recall@" + std::to_string(k), r.val_recall}};
}

namespace {

double validation_recall(const ModelParams& params, const DualGraphs& graphs,
                         const std::vector<LabeledPair>& validation, const TrainConfig& config) {
  const auto emb = forward(params, graphs);
  const auto lists =
      rank_users(emb.h_u, emb.h_v, params, validation, config.include_less_relevant);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& l : lists) {
    if (l.n_relevant() == 0) continue;
    sum += recall_at_k(l, config.early_stop_k);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace

TrainResult train(const TrainConfig& config, const DatasetSplit& split, const DualGraphs& graphs,
                  ModelParams params, const EpochCallback& on_epoch) {
  config.validate();
  TripletSampler sampler(split.train, graphs.n_users, graphs.n_videos);
  const std::size_t per_epoch = sampler.triplets_per_epoch();

  TrainResult result;
  result.batches_per_epoch = (per_epoch + config.batch_size - 1) / config.batch_size;
  result.total_steps = config.max_epochs * result.batches_per_epoch;
  result.params = params;
  if (config.max_epochs == 0) return result;
  if (per_epoch == 0) throw DataError("no highly positive training pairs to build triplets from");

  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32), 0x2u};
  std::mt19937_64 rng(seq);
  AdamW optimizer({config.beta1, config.beta2, config.eps, config.weight_decay});
  const ObjectiveSettings settings{config.lambda, config.bpr_mode};
  ForwardTrace trace;

  result.best_val_recall = -1.0;
  std::size_t since_best = 0;
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    auto triplets = sampler.sample_epoch(rng);
    EpochRecord rec;
    rec.epoch = epoch;
    if (config.bpr_mode == BprMode::UnseenNegative) {
      rec.unseen_skipped = sampler.attach_unseen(triplets, rng);
    }
    std::shuffle(triplets.begin(), triplets.end(), rng);

    std::size_t n_batches = 0;
    for (std::size_t start = 0; start < triplets.size(); start += config.batch_size) {
      const std::size_t end = std::min(triplets.size(), start + config.batch_size);
      const std::span<const Triplet> batch(triplets.data() + start, end - start);
      const auto bg = backward(params, graphs, batch, settings, trace);
      rec.lr = cosine_lr(step, result.total_steps, config.lr0, config.lr_min);
      optimizer.step(params, bg.grads, rec.lr);
      ++step;
      ++n_batches;
      rec.loss += bg.loss.combined;
      rec.bpr_hl += bg.loss.bpr_hl;
      rec.bpr_hn += bg.loss.bpr_hn;
      rec.bpr += bg.loss.bpr;
      rec.bce += bg.loss.bce;
    }
    const double nb = static_cast<double>(n_batches);
    rec.loss /= nb;
    rec.bpr_hl /= nb;
    rec.bpr_hn /= nb;
    rec.bpr /= nb;
    rec.bce /= nb;
    rec.val_recall = validation_recall(params, graphs, split.validation, config);
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (rec.val_recall > result.best_val_recall) {
      result.best_val_recall = rec.val_recall;
      result.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      result.stopped_early = epoch < config.max_epochs;
      break;
    }
  }
  return result;
}

}  // namespace skiprec
