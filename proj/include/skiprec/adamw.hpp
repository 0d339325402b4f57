#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "skiprec/model.hpp"

namespace skiprec {

/// lr_min + (lr0 - lr_min) (1 + cos(pi step / total)) / 2. total == 0 yields lr0.
double cosine_lr(std::size_t step, std::size_t total_steps, double lr0, double lr_min);

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;
};

/// AdamW with decoupled weight decay (theta <- theta (1 - lr wd)) and
/// bias-corrected moments. Only trainable parameters are touched, so fixed
/// visual features are never decayed.
class AdamW {
 public:
  explicit AdamW(AdamWConfig config = {}) : config_(config) {}

  void step(ModelParams& params, const ModelParams& grads, double lr);

  std::size_t steps() const noexcept { return steps_; }
  const AdamWConfig& config() const noexcept { return config_; }

 private:
  struct Moments {
    Matrix m;
    Matrix v;
  };
  AdamWConfig config_;
  std::size_t steps_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace skiprec
