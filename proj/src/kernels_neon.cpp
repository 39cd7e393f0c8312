// NEON kernel variants (aarch64).  Same operation tree as the scalar
// reference, two doubles per vector.

#include <arm_neon.h>

#include <algorithm>
#include <cstddef>

namespace gfield::kernels::neon_impl {

void stencil_set(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef) {
  const float64x2_t two = vdupq_n_f64(2.0);
  const float64x2_t c = vdupq_n_f64(coef);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t lo = vld1q_f64(u + i - stride);
    const float64x2_t hi = vld1q_f64(u + i + stride);
    const float64x2_t mid = vld1q_f64(u + i);
    const float64x2_t lap = vsubq_f64(vaddq_f64(lo, hi), vmulq_f64(two, mid));
    vst1q_f64(acc + i, vmulq_f64(lap, c));
  }
  for (; i < n; ++i)
    acc[i] = ((u[i - stride] + u[i + stride]) - 2.0 * u[i]) * coef;
}

void stencil_add(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef) {
  const float64x2_t two = vdupq_n_f64(2.0);
  const float64x2_t c = vdupq_n_f64(coef);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t lo = vld1q_f64(u + i - stride);
    const float64x2_t hi = vld1q_f64(u + i + stride);
    const float64x2_t mid = vld1q_f64(u + i);
    const float64x2_t lap = vsubq_f64(vaddq_f64(lo, hi), vmulq_f64(two, mid));
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vmulq_f64(lap, c)));
  }
  for (; i < n; ++i)
    acc[i] += ((u[i - stride] + u[i + stride]) - 2.0 * u[i]) * coef;
}

void bang_bang_step(double* out, const double* u, const double* lap,
                    std::size_t n, double c_up, double c_dn) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t vup = vdupq_n_f64(c_up);
  const float64x2_t vdn = vdupq_n_f64(c_dn);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t l = vld1q_f64(lap + i);
    const float64x2_t pos = vmulq_f64(vup, vmaxq_f64(l, zero));
    const float64x2_t neg = vmulq_f64(vdn, vminq_f64(l, zero));
    vst1q_f64(out + i, vaddq_f64(vaddq_f64(vld1q_f64(u + i), pos), neg));
  }
  for (; i < n; ++i) {
    const double pos = c_up * std::max(lap[i], 0.0);
    const double neg = c_dn * std::min(lap[i], 0.0);
    out[i] = (u[i] + pos) + neg;
  }
}

void fir4_add(double* out, const double* in, std::size_t n,
              double c0, double c1, double c2, double c3, double w) {
  const float64x2_t v0 = vdupq_n_f64(c0);
  const float64x2_t v1 = vdupq_n_f64(c1);
  const float64x2_t v2 = vdupq_n_f64(c2);
  const float64x2_t v3 = vdupq_n_f64(c3);
  const float64x2_t vw = vdupq_n_f64(w);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vmulq_f64(v0, vld1q_f64(in + i));
    const float64x2_t b = vmulq_f64(v1, vld1q_f64(in + i + 1));
    const float64x2_t c = vmulq_f64(v2, vld1q_f64(in + i + 2));
    const float64x2_t d = vmulq_f64(v3, vld1q_f64(in + i + 3));
    const float64x2_t s = vaddq_f64(vaddq_f64(a, b), vaddq_f64(c, d));
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(out + i), vmulq_f64(vw, s)));
  }
  for (; i < n; ++i) {
    const double s =
        ((c0 * in[i] + c1 * in[i + 1]) + (c2 * in[i + 2] + c3 * in[i + 3]));
    out[i] += w * s;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(a + i);
    acc = vaddq_f64(acc, vmulq_f64(v, v));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

} // namespace gfield::kernels::neon_impl
