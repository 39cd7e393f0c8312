#pragma once

#include <cstddef>
#include <vector>

// Small dense symmetric matrices only; dimensions here are the number of
// regions in a law (a handful), so a cyclic Jacobi sweep is plenty.
namespace gfield::linalg {

struct SymEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column k (row-major n*n) pairs with values[k]
};

// Eigendecomposition of a symmetric n*n matrix (row-major).
SymEigen jacobi_eigen(const std::vector<double>& a, std::size_t n);

struct GaussHermite {
  std::vector<double> points;   // abscissae for a standard normal
  std::vector<double> weights;  // sum to 1
};

// Rule of order q: sum_i w_i f(x_i) == E[f(Z)], Z ~ N(0,1), exact for
// polynomials of degree <= 2q-1.  Golub-Welsch on the Hermite recurrence.
GaussHermite gauss_hermite(std::size_t q);

} // namespace gfield::linalg
