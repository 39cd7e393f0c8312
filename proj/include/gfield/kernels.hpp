#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops of the solvers.  Every kernel has a scalar
// reference implementation plus vector variants (AVX2 on x86-64, NEON on
// aarch64) selected at runtime.  Elementwise kernels evaluate the same
// operation tree per lane, so all backends agree bit for bit; reductions
// use lane accumulators and may differ in the last ulps.
namespace gfield::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b);

// Backends compiled into this binary and usable on this CPU.
bool backend_available(Backend b);

// Backend in use.  Resolved on first call: GFIELD_SIMD=scalar|avx2|neon|auto
// overrides CPU detection.
Backend active_backend();

// Force a backend (tests use this to compare variants). Throws
// std::invalid_argument if the backend is unavailable.
void force_backend(Backend b);

// acc[i] = coef * (u[i-stride] + u[i+stride] - 2*u[i])
void stencil_set(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef);

// acc[i] += coef * (u[i-stride] + u[i+stride] - 2*u[i])
void stencil_add(double* acc, const double* u, std::size_t n,
                 std::ptrdiff_t stride, double coef);

// out[i] = u[i] + c_up*max(lap[i],0) + c_dn*min(lap[i],0)
// One explicit monotone time step: c_up/c_dn carry dt and the extreme
// diffusion halves.
void bang_bang_step(double* out, const double* u, const double* lap,
                    std::size_t n, double c_up, double c_dn);

// out[i] += w * (c0*in[i] + c1*in[i+1] + c2*in[i+2] + c3*in[i+3])
// 4-tap filter used by the quadrature convolution of the DP oracle
// (cubic interpolation at a constant fractional shift).
void fir4_add(double* out, const double* in, std::size_t n,
              double c0, double c1, double c2, double c3, double w);

double dot(const double* a, const double* b, std::size_t n);
double sum_sq(const double* a, std::size_t n);

} // namespace gfield::kernels
