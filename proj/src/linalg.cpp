#include "gfield/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace gfield::linalg {

SymEigen jacobi_eigen(const std::vector<double>& a_in, std::size_t n) {
  if (a_in.size() != n * n) throw std::invalid_argument("jacobi_eigen: size mismatch");
  std::vector<double> a = a_in;
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return s;
  };

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double tol = (scale > 0 ? scale : 1.0) * 1e-30;

  for (int sweep = 0; sweep < 100 && off() > tol * tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= tol) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  // sort ascending, permuting columns with values
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });

  SymEigen out;
  out.values.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[order[k] * n + order[k]];
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + k] = v[r * n + order[k]];
  }
  return out;
}

namespace {
GaussHermite build_gauss_hermite(std::size_t q) {
  // Jacobi matrix of the probabilists' Hermite polynomials: zero diagonal,
  // off-diagonal sqrt(k).  Eigenvalues are the nodes for N(0,1) directly.
  std::vector<double> jm(q * q, 0.0);
  for (std::size_t k = 1; k < q; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jm[(k - 1) * q + k] = b;
    jm[k * q + (k - 1)] = b;
  }
  const SymEigen eig = jacobi_eigen(jm, q);
  GaussHermite gh;
  gh.points.resize(q);
  gh.weights.resize(q);
  for (std::size_t k = 0; k < q; ++k) {
    gh.points[k] = eig.values[k];
    const double v0 = eig.vectors[0 * q + k];
    gh.weights[k] = v0 * v0;
  }
  // normalize away rounding: weights of a Gauss rule sum to the 0th moment
  double s = 0.0;
  for (double w : gh.weights) s += w;
  for (double& w : gh.weights) w /= s;
  return gh;
}
} // namespace

GaussHermite gauss_hermite(std::size_t q) {
  if (q < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  static std::mutex mu;
  static std::map<std::size_t, GaussHermite> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, build_gauss_hermite(q)).first;
  return it->second;
}

} // namespace gfield::linalg
