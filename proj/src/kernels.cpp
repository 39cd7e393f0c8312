#include "gfield/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gfield::kernels {

namespace scalar_impl {

void stencil_set(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef) {
  for (std::size_t i = 0; i < n; ++i)
    acc[i] = ((u[i - stride] + u[i + stride]) - 2.0 * u[i]) * coef;
}

void stencil_add(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef) {
  for (std::size_t i = 0; i < n; ++i)
    acc[i] += ((u[i - stride] + u[i + stride]) - 2.0 * u[i]) * coef;
}

void bang_bang_step(double* out, const double* u, const double* lap,
                    std::size_t n, double c_up, double c_dn) {
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = c_up * std::max(lap[i], 0.0);
    const double neg = c_dn * std::min(lap[i], 0.0);
    out[i] = (u[i] + pos) + neg;
  }
}

void fir4_add(double* out, const double* in, std::size_t n,
              double c0, double c1, double c2, double c3, double w) {
  for (std::size_t i = 0; i < n; ++i) {
    const double s =
        ((c0 * in[i] + c1 * in[i + 1]) + (c2 * in[i + 2] + c3 * in[i + 3]));
    out[i] += w * s;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

} // namespace scalar_impl

#if defined(GFIELD_HAVE_AVX2)
namespace avx2_impl {
void stencil_set(double*, const double*, std::size_t, std::ptrdiff_t, double);
void stencil_add(double*, const double*, std::size_t, std::ptrdiff_t, double);
void bang_bang_step(double*, const double*, const double*, std::size_t, double, double);
void fir4_add(double*, const double*, std::size_t, double, double, double, double, double);
double dot(const double*, const double*, std::size_t);
double sum_sq(const double*, std::size_t);
} // namespace avx2_impl
#endif

#if defined(GFIELD_HAVE_NEON)
namespace neon_impl {
void stencil_set(double*, const double*, std::size_t, std::ptrdiff_t, double);
void stencil_add(double*, const double*, std::size_t, std::ptrdiff_t, double);
void bang_bang_step(double*, const double*, const double*, std::size_t, double, double);
void fir4_add(double*, const double*, std::size_t, double, double, double, double, double);
double dot(const double*, const double*, std::size_t);
double sum_sq(const double*, std::size_t);
} // namespace neon_impl
#endif

namespace {

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(GFIELD_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::neon:
#if defined(GFIELD_HAVE_NEON)
      return true; // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

Backend detect_backend() {
  if (const char* env = std::getenv("GFIELD_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && cpu_supports(Backend::avx2)) return Backend::avx2;
    if (v == "neon" && cpu_supports(Backend::neon)) return Backend::neon;
    // unknown value or unsupported request falls through to auto
  }
  if (cpu_supports(Backend::avx2)) return Backend::avx2;
  if (cpu_supports(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<int> g_backend{-1};

Backend current() {
  int b = g_backend.load(std::memory_order_relaxed);
  if (b < 0) {
    b = static_cast<int>(detect_backend());
    g_backend.store(b, std::memory_order_relaxed);
  }
  return static_cast<Backend>(b);
}

} // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "?";
}

bool backend_available(Backend b) { return cpu_supports(b); }

Backend active_backend() { return current(); }

void force_backend(Backend b) {
  if (!cpu_supports(b))
    throw std::invalid_argument("kernel backend unavailable: " +
                                std::string(backend_name(b)));
  g_backend.store(static_cast<int>(b), std::memory_order_relaxed);
}

#if defined(GFIELD_HAVE_AVX2)
#define GFIELD_DISPATCH(fn, ...)                       \
  switch (current()) {                                 \
    case Backend::avx2: return avx2_impl::fn(__VA_ARGS__); \
    default: return scalar_impl::fn(__VA_ARGS__);      \
  }
#elif defined(GFIELD_HAVE_NEON)
#define GFIELD_DISPATCH(fn, ...)                       \
  switch (current()) {                                 \
    case Backend::neon: return neon_impl::fn(__VA_ARGS__); \
    default: return scalar_impl::fn(__VA_ARGS__);      \
  }
#else
#define GFIELD_DISPATCH(fn, ...) return scalar_impl::fn(__VA_ARGS__)
#endif

void stencil_set(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef) {
  GFIELD_DISPATCH(stencil_set, acc, u, n, stride, coef);
}

void stencil_add(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef) {
  GFIELD_DISPATCH(stencil_add, acc, u, n, stride, coef);
}

void bang_bang_step(double* out, const double* u, const double* lap,
                    std::size_t n, double c_up, double c_dn) {
  GFIELD_DISPATCH(bang_bang_step, out, u, lap, n, c_up, c_dn);
}

void fir4_add(double* out, const double* in, std::size_t n,
              double c0, double c1, double c2, double c3, double w) {
  GFIELD_DISPATCH(fir4_add, out, in, n, c0, c1, c2, c3, w);
}

double dot(const double* a, const double* b, std::size_t n) {
  GFIELD_DISPATCH(dot, a, b, n);
}

double sum_sq(const double* a, std::size_t n) {
  GFIELD_DISPATCH(sum_sq, a, n);
}

#undef GFIELD_DISPATCH

} // namespace gfield::kernels
