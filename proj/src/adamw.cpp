#include "skiprec/adamw.hpp"

#include <cmath>
#include <numbers>

#include "skiprec/error.hpp"
#include "skiprec/kernels.hpp"

namespace skiprec {

double cosine_lr(std::size_t step, std::size_t total_steps, double lr0, double lr_min) {
  if (total_steps == 0) return lr0;
  if (step >= total_steps) return lr_min;
  const double phase = std::numbers::pi * static_cast<double>(step) / static_cast<double>(total_steps);
  // Convex-combination form hits both endpoints exactly.
  const double w = (1.0 + std::cos(phase)) / 2.0;
  return lr0 * w + lr_min * (1.0 - w);
}

void AdamW::step(ModelParams& params, const ModelParams& grads, double lr) {
  ++steps_;
  const double t = static_cast<double>(steps_);
  const kernels::AdamWParams hp{lr,
                                config_.beta1,
                                config_.beta2,
                                config_.eps,
                                config_.weight_decay,
                                1.0 - std::pow(config_.beta1, t),
                                1.0 - std::pow(config_.beta2, t)};
  auto grad_list = parameter_list(grads, true);
  auto param_list = parameter_list(params, true);
  if (grad_list.size() != param_list.size()) throw DataError("AdamW: gradient set mismatch");
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < param_list.size(); ++i) {
    auto& [name, param] = param_list[i];
    const Matrix* grad = grad_list[i].second;
    if (!param->same_shape(*grad)) throw DataError("AdamW: shape mismatch for " + name);
    auto [it, inserted] = moments_.try_emplace(name);
    if (inserted) {
      it->second.m = Matrix(param->rows(), param->cols());
      it->second.v = Matrix(param->rows(), param->cols());
    }
    k.adamw(param->size(), param->data(), grad->data(), it->second.m.data(), it->second.v.data(),
            hp);
  }
}

}  // namespace skiprec
