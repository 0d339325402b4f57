#pragma once

#include <span>

#include "skiprec/config.hpp"
#include "skiprec/losses.hpp"
#include "skiprec/model.hpp"
#include "skiprec/sampling.hpp"

namespace skiprec {

struct ObjectiveSettings {
  double lambda = 0.5;
  BprMode bpr_mode = BprMode::Hierarchical;
};

/// Gradients share ModelParams' layout; h_v0 stays empty in fixed mode.
struct BatchGradients {
  LossBreakdown loss;
  ModelParams grads;
};

/// Combined loss of one batch. Per item:
///   BPR terms use each term's own mean over present pairs (hierarchical)
///   or the mean over triplets with an unseen draw (unseen-negative);
///   BCE covers every scored item of the triplets, h -> 1, l and n -> 0.
LossBreakdown batch_loss(const ModelParams& params, const DualGraphs& graphs,
                         std::span<const Triplet> batch, const ObjectiveSettings& settings);

/// Loss plus exact gradients of every trainable parameter. `trace` may carry
/// a cached first-hop input across calls in fixed-feature mode.
/// Throws NumericalError when a gradient is not finite.
BatchGradients backward(const ModelParams& params, const DualGraphs& graphs,
                        std::span<const Triplet> batch, const ObjectiveSettings& settings,
                        ForwardTrace& trace);

inline BatchGradients backward(const ModelParams& params, const DualGraphs& graphs,
                               std::span<const Triplet> batch, const ObjectiveSettings& settings) {
  ForwardTrace trace;
  return backward(params, graphs, batch, settings, trace);
}

}  // namespace skiprec
