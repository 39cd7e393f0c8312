// AVX2 kernel variants.  Elementwise kernels mirror the scalar operation
// tree exactly (mul/add, no FMA) so results are bit-identical per lane.

#include <immintrin.h>

#include <algorithm>
#include <cstddef>

namespace gfield::kernels::avx2_impl {

void stencil_set(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d c = _mm256_set1_pd(coef);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lo = _mm256_loadu_pd(u + i - stride);
    const __m256d hi = _mm256_loadu_pd(u + i + stride);
    const __m256d mid = _mm256_loadu_pd(u + i);
    const __m256d lap =
        _mm256_sub_pd(_mm256_add_pd(lo, hi), _mm256_mul_pd(two, mid));
    _mm256_storeu_pd(acc + i, _mm256_mul_pd(lap, c));
  }
  for (; i < n; ++i)
    acc[i] = ((u[i - stride] + u[i + stride]) - 2.0 * u[i]) * coef;
}

void stencil_add(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d c = _mm256_set1_pd(coef);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lo = _mm256_loadu_pd(u + i - stride);
    const __m256d hi = _mm256_loadu_pd(u + i + stride);
    const __m256d mid = _mm256_loadu_pd(u + i);
    const __m256d lap =
        _mm256_sub_pd(_mm256_add_pd(lo, hi), _mm256_mul_pd(two, mid));
    const __m256d prev = _mm256_loadu_pd(acc + i);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(prev, _mm256_mul_pd(lap, c)));
  }
  for (; i < n; ++i)
    acc[i] += ((u[i - stride] + u[i + stride]) - 2.0 * u[i]) * coef;
}

void bang_bang_step(double* out, const double* u, const double* lap,
                    std::size_t n, double c_up, double c_dn) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d vup = _mm256_set1_pd(c_up);
  const __m256d vdn = _mm256_set1_pd(c_dn);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d l = _mm256_loadu_pd(lap + i);
    const __m256d pos = _mm256_mul_pd(vup, _mm256_max_pd(l, zero));
    const __m256d neg = _mm256_mul_pd(vdn, _mm256_min_pd(l, zero));
    const __m256d v =
        _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(u + i), pos), neg);
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) {
    const double pos = c_up * std::max(lap[i], 0.0);
    const double neg = c_dn * std::min(lap[i], 0.0);
    out[i] = (u[i] + pos) + neg;
  }
}

void fir4_add(double* out, const double* in, std::size_t n,
              double c0, double c1, double c2, double c3, double w) {
  const __m256d v0 = _mm256_set1_pd(c0);
  const __m256d v1 = _mm256_set1_pd(c1);
  const __m256d v2 = _mm256_set1_pd(c2);
  const __m256d v3 = _mm256_set1_pd(c3);
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_mul_pd(v0, _mm256_loadu_pd(in + i));
    const __m256d b = _mm256_mul_pd(v1, _mm256_loadu_pd(in + i + 1));
    const __m256d c = _mm256_mul_pd(v2, _mm256_loadu_pd(in + i + 2));
    const __m256d d = _mm256_mul_pd(v3, _mm256_loadu_pd(in + i + 3));
    const __m256d s = _mm256_add_pd(_mm256_add_pd(a, b), _mm256_add_pd(c, d));
    const __m256d prev = _mm256_loadu_pd(out + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(prev, _mm256_mul_pd(vw, s)));
  }
  for (; i < n; ++i) {
    const double s =
        ((c0 * in[i] + c1 * in[i + 1]) + (c2 * in[i + 2] + c3 * in[i + 3]));
    out[i] += w * s;
  }
}

namespace {
double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
} // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

} // namespace gfield::kernels::avx2_impl
