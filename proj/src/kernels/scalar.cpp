#include <cmath>

#include "skiprec/kernels.hpp"

namespace skiprec::kernels {
namespace {

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(std::size_t n, const double* x, const double* y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void relu_scalar(std::size_t n, const double* in, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

void relu_backward_scalar(std::size_t n, const double* pre, double* grad) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pre[i] > 0.0)) grad[i] = 0.0;
  }
}

void average_scalar(std::size_t n, const double* a, const double* b, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (a[i] + b[i]);
}

void adamw_scalar(std::size_t n, double* param, const double* grad, double* m, double* v,
                  const AdamWParams& p) {
  const double decay = 1.0 - p.lr * p.weight_decay;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = p.beta1 * m[i] + (1.0 - p.beta1) * grad[i];
    v[i] = p.beta2 * v[i] + (1.0 - p.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / p.bias_correction1;
    const double v_hat = v[i] / p.bias_correction2;
    param[i] = param[i] * decay - p.lr * m_hat / (std::sqrt(v_hat) + p.eps);
  }
}

constexpr KernelTable kScalar{
    Backend::Scalar, axpy_scalar, dot_scalar, relu_scalar, relu_backward_scalar,
    average_scalar,  adamw_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace skiprec::kernels
