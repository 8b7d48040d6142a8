#include <algorithm>
#include <cmath>
#include <limits>

#include "aclab/simd/kernels.hpp"

namespace aclab::simd {

namespace {

void laplacian(const double* in, double* out, std::size_t begin, std::size_t end, const std::size_t* strides, int dim,
               double inv_h2) {
  const double center = 2.0 * dim;
  if (dim == 2) {
    const std::size_t sy = strides[1];
    for (std::size_t i = begin; i < end; ++i) {
      const double sum = in[i - 1] + in[i + 1] + in[i - sy] + in[i + sy];
      out[i] = (sum - center * in[i]) * inv_h2;
    }
    return;
  }
  const std::size_t sy = strides[1];
  const std::size_t sz = strides[2];
  for (std::size_t i = begin; i < end; ++i) {
    const double sum = in[i - 1] + in[i + 1] + in[i - sy] + in[i + sy] + in[i - sz] + in[i + sz];
    out[i] = (sum - center * in[i]) * inv_h2;
  }
}

void central_difference(const double* in, double* out, std::size_t begin, std::size_t end, std::size_t stride,
                        double inv_2h) {
  for (std::size_t i = begin; i < end; ++i) out[i] = (in[i + stride] - in[i - stride]) * inv_2h;
}

double dot(const double* a, const double* b, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double* y, double alpha, const double* x, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) y[i] += alpha * x[i];
}

void scaled_residual(double* out, const double* lap, const double* grad_w, const double* mask, double scale,
                     std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) out[i] = scale * (grad_w[i] - lap[i]) * mask[i];
}

void accumulate_square(double* acc, const double* x, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) acc[i] += x[i] * x[i];
}

double max_value(const double* x, std::size_t begin, std::size_t end) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = begin; i < end; ++i) m = std::max(m, x[i]);
  return m;
}

double weighted_sq_diff(const double* u, std::size_t stride, const double* w, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double d = u[i + stride] - u[i];
    s += w[i] * d * d;
  }
  return s;
}

double weighted_sq_diff_change(const double* u, const double* v, std::size_t stride, const double* w,
                               std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double du = u[i + stride] - u[i];
    const double change = (v[i + stride] - u[i + stride]) - (v[i] - u[i]);
    s += w[i] * change * (2.0 * du + change);
  }
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",        laplacian,        central_difference, dot,
      axpy,            scaled_residual,  accumulate_square,  max_value,
      weighted_sq_diff, weighted_sq_diff_change,
  };
  return table;
}

}  // namespace aclab::simd
