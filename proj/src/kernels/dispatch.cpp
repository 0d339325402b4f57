#include <atomic>
#include <cstdlib>
#include <string>

#include "skiprec/error.hpp"
#include "skiprec/kernels.hpp"

namespace skiprec::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(SKIPREC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() noexcept {
  if (const char* forced = std::getenv("SKIPREC_KERNELS")) {
    if (std::string(forced) == "scalar") return Backend::Scalar;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{&table_for(detect())};
  return table;
}

}  // namespace

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table_for(Backend backend) {
  if (!backend_available(backend)) {
    throw UsageError("kernel backend '" + std::string(backend_name(backend)) +
                     "' is not supported on this CPU");
  }
#if defined(SKIPREC_HAVE_AVX2)
  if (backend == Backend::Avx2) return avx2_table();
#endif
  return scalar_table();
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

Backend active_backend() noexcept { return active().backend; }

void set_backend(Backend backend) {
  current().store(&table_for(backend), std::memory_order_release);
}

}  // namespace skiprec::kernels
