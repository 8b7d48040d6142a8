// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// only entered after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "aclab/simd/kernels.hpp"

namespace aclab::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

void laplacian(const double* in, double* out, std::size_t begin, std::size_t end, const std::size_t* strides, int dim,
               double inv_h2) {
  const double center = 2.0 * dim;
  const __m256d vc = _mm256_set1_pd(center);
  const __m256d vs = _mm256_set1_pd(inv_h2);
  const std::size_t sy = strides[1];
  const std::size_t sz = dim == 3 ? strides[2] : 0;
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    __m256d sum = _mm256_add_pd(_mm256_loadu_pd(in + i - 1), _mm256_loadu_pd(in + i + 1));
    sum = _mm256_add_pd(sum, _mm256_loadu_pd(in + i - sy));
    sum = _mm256_add_pd(sum, _mm256_loadu_pd(in + i + sy));
    if (dim == 3) {
      sum = _mm256_add_pd(sum, _mm256_loadu_pd(in + i - sz));
      sum = _mm256_add_pd(sum, _mm256_loadu_pd(in + i + sz));
    }
    const __m256d r = _mm256_fnmadd_pd(vc, _mm256_loadu_pd(in + i), sum);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(r, vs));
  }
  for (; i < end; ++i) {
    double sum = in[i - 1] + in[i + 1] + in[i - sy] + in[i + sy];
    if (dim == 3) sum += in[i - sz] + in[i + sz];
    out[i] = (sum - center * in[i]) * inv_h2;
  }
}

void central_difference(const double* in, double* out, std::size_t begin, std::size_t end, std::size_t stride,
                        double inv_2h) {
  const __m256d vs = _mm256_set1_pd(inv_2h);
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(in + i + stride), _mm256_loadu_pd(in + i - stride));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, vs));
  }
  for (; i < end; ++i) out[i] = (in[i + stride] - in[i - stride]) * inv_2h;
}

double dot(const double* a, const double* b, std::size_t begin, std::size_t end) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = begin;
  for (; i + 8 <= end; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < end; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double* y, double alpha, const double* x, std::size_t begin, std::size_t end) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < end; ++i) y[i] += alpha * x[i];
}

void scaled_residual(double* out, const double* lap, const double* grad_w, const double* mask, double scale,
                     std::size_t begin, std::size_t end) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(grad_w + i), _mm256_loadu_pd(lap + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_mul_pd(vs, d), _mm256_loadu_pd(mask + i)));
  }
  for (; i < end; ++i) out[i] = scale * (grad_w[i] - lap[i]) * mask[i];
}

void accumulate_square(double* acc, const double* x, std::size_t begin, std::size_t end) {
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(v, v, _mm256_loadu_pd(acc + i)));
  }
  for (; i < end; ++i) acc[i] += x[i] * x[i];
}

double max_value(const double* x, std::size_t begin, std::size_t end) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = begin;
  if (end - begin >= 4) {
    __m256d vm = _mm256_set1_pd(m);
    for (; i + 4 <= end; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
    m = hmax(vm);
  }
  for (; i < end; ++i) m = std::max(m, x[i]);
  return m;
}

double weighted_sq_diff(const double* u, std::size_t stride, const double* w, std::size_t begin, std::size_t end) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(u + i + stride), _mm256_loadu_pd(u + i));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), d), d, acc);
  }
  double s = hsum(acc);
  for (; i < end; ++i) {
    const double d = u[i + stride] - u[i];
    s += w[i] * d * d;
  }
  return s;
}

double weighted_sq_diff_change(const double* u, const double* v, std::size_t stride, const double* w,
                               std::size_t begin, std::size_t end) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d ua = _mm256_loadu_pd(u + i + stride);
    const __m256d ub = _mm256_loadu_pd(u + i);
    const __m256d du = _mm256_sub_pd(ua, ub);
    const __m256d change =
        _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i + stride), ua), _mm256_sub_pd(_mm256_loadu_pd(v + i), ub));
    const __m256d prod = _mm256_mul_pd(change, _mm256_add_pd(_mm256_add_pd(du, du), change));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), prod, acc);
  }
  double s = hsum(acc);
  for (; i < end; ++i) {
    const double du = u[i + stride] - u[i];
    const double change = (v[i + stride] - u[i + stride]) - (v[i] - u[i]);
    s += w[i] * change * (2.0 * du + change);
  }
  return s;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{
      "avx2",          laplacian,        central_difference, dot,
      axpy,            scaled_residual,  accumulate_square,  max_value,
      weighted_sq_diff, weighted_sq_diff_change,
  };
  return &table;
}

}  // namespace aclab::simd
