#include <atomic>
#include <cstdlib>
#include <string>

#include "aclab/error.hpp"
#include "aclab/simd/kernels.hpp"

namespace aclab::simd {

#ifndef ACLAB_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_supports_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* resolve(std::string_view name) {
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") {
    const KernelTable* t = avx2_kernels();
    if (t == nullptr || !cpu_supports_avx2_fma()) throw InvalidArgument("avx2 kernels are not available here");
    return t;
  }
  if (name == "auto" || name.empty()) {
    const KernelTable* t = avx2_kernels();
    return (t != nullptr && cpu_supports_avx2_fma()) ? t : &scalar_kernels();
  }
  throw InvalidArgument("unknown kernel variant '" + std::string(name) + "'");
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{[] {
    const char* env = std::getenv("ACLAB_KERNELS");
    return resolve(env != nullptr ? std::string_view(env) : std::string_view("auto"));
  }()};
  return table;
}

}  // namespace

const KernelTable& active_kernels() { return *current().load(std::memory_order_acquire); }

void select_kernels(std::string_view name) { current().store(resolve(name), std::memory_order_release); }

}  // namespace aclab::simd
