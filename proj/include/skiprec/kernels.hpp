#pragma once

// Inner-loop arithmetic kernels. Every kernel has a scalar reference
// implementation; vectorized variants are selected once at startup from the
// host's CPU features and must agree with the reference to rounding error.

#include <cstddef>
#include <span>
#include <string_view>

namespace skiprec::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend backend) noexcept;

struct AdamWParams {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double weight_decay;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

/// Function table implemented once per backend.
struct KernelTable {
  Backend backend;
  // y += a * x
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  double (*dot)(std::size_t n, const double* x, const double* y);
  // out = max(in, 0); in and out may alias
  void (*relu)(std::size_t n, const double* in, double* out);
  // grad[i] = pre[i] > 0 ? grad[i] : 0
  void (*relu_backward)(std::size_t n, const double* pre, double* grad);
  // out = (a + b) / 2
  void (*average)(std::size_t n, const double* a, const double* b, double* out);
  // Decoupled weight decay followed by a bias-corrected Adam update.
  void (*adamw)(std::size_t n, double* param, const double* grad, double* m, double* v,
                const AdamWParams& p);
};

const KernelTable& scalar_table() noexcept;
#if defined(SKIPREC_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

bool backend_available(Backend backend) noexcept;
const KernelTable& table_for(Backend backend);

/// Backend used by the free functions below. Defaults to the best one the
/// CPU supports; SKIPREC_KERNELS=scalar in the environment forces scalar.
const KernelTable& active() noexcept;
Backend active_backend() noexcept;
void set_backend(Backend backend);

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(y.size(), a, x.data(), y.data());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.size(), x.data(), y.data());
}
inline void relu(std::span<const double> in, std::span<double> out) {
  active().relu(out.size(), in.data(), out.data());
}
inline void relu_backward(std::span<const double> pre, std::span<double> grad) {
  active().relu_backward(grad.size(), pre.data(), grad.data());
}
inline void average(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  active().average(out.size(), a.data(), b.data(), out.data());
}

}  // namespace skiprec::kernels
