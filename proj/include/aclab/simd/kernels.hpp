#pragma once

// Data-parallel inner loops of the solver and the field operators.
//
// Every kernel works on a flat index range [begin, end) of a padded grid
// array; stencil kernels read at i +/- stride and the caller guarantees those
// reads stay inside the array. A scalar reference table is always available;
// an AVX2/FMA table is compiled when the toolchain supports it and selected
// at runtime when the CPU does. The two are kept equivalent up to rounding
// (see tests/test_simd.cpp).

#include <cstddef>
#include <string_view>

namespace aclab::simd {

struct KernelTable {
  std::string_view name;

  // out[i] = (sum over axes of in[i-s] + in[i+s] - 2 in[i]) * inv_h2
  void (*laplacian)(const double* in, double* out, std::size_t begin, std::size_t end, const std::size_t* strides,
                    int dim, double inv_h2);

  // out[i] = (in[i+stride] - in[i-stride]) * inv_2h
  void (*central_difference)(const double* in, double* out, std::size_t begin, std::size_t end, std::size_t stride,
                             double inv_2h);

  double (*dot)(const double* a, const double* b, std::size_t begin, std::size_t end);

  // y[i] += alpha * x[i]
  void (*axpy)(double* y, double alpha, const double* x, std::size_t begin, std::size_t end);

  // out[i] = scale * (grad_w[i] - lap[i]) * mask[i]
  void (*scaled_residual)(double* out, const double* lap, const double* grad_w, const double* mask, double scale,
                          std::size_t begin, std::size_t end);

  // acc[i] += x[i] * x[i]
  void (*accumulate_square)(double* acc, const double* x, std::size_t begin, std::size_t end);

  double (*max_value)(const double* x, std::size_t begin, std::size_t end);

  // sum of w[i] * (u[i+stride] - u[i])^2
  double (*weighted_sq_diff)(const double* u, std::size_t stride, const double* w, std::size_t begin,
                             std::size_t end);

  // sum of w[i] * ((v[i+s] - v[i])^2 - (u[i+s] - u[i])^2), formed from the node
  // steps v - u so that small changes keep their relative precision.
  double (*weighted_sq_diff_change)(const double* u, const double* v, std::size_t stride, const double* w,
                                    std::size_t begin, std::size_t end);
};

const KernelTable& scalar_kernels();

// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2_fma();

// Table used by the library. Chosen once: AVX2 when compiled and supported,
// scalar otherwise; the ACLAB_KERNELS environment variable ("scalar",
// "avx2") overrides the choice.
const KernelTable& active_kernels();

// Test/CLI hook: "scalar", "avx2" or "auto". Throws InvalidArgument for an
// unknown or unavailable variant.
void select_kernels(std::string_view name);

}  // namespace aclab::simd
