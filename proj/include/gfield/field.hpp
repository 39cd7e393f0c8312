#pragma once

#include <cstdint>
#include <utility>

#include "gfield/engine.hpp"
#include "gfield/oracle.hpp"
#include "gfield/report.hpp"

// The spatial white noise: finite-dimensional laws from regions, the
// defining axioms as a runnable suite, consistency of the generating
// family, the L2 stochastic integral, and sampling diagnostics under a
// fixed representing measure.
namespace gfield {

struct FieldLaw {
  std::vector<geo::Region> regions;
  geo::GramLaw law;
};

FieldLaw make_field_law(std::vector<geo::Region> regions, const GParams& p);

// Checks, per region and per disjoint/overlapping pair:
//   (i)  E[W_A^2] = sigma_hi^2 |A|,  -E[-W_A^2] = sigma_lo^2 |A|
//   cross moments of disjoint pairs vanish
//   additivity defect (W_{A1 u A2} - W_{A1} - W_{A2})^2 has zero expectation
//   modularity defect (W_{A u B} + W_{A n B} - W_A - W_B)^2 likewise
// Quadratic-form identities are contracted at Gram level first; when the
// contraction is exactly zero the solver is never invoked and the item is
// marked gram_exact.
CheckReport whitenoise_axiom_suite(const std::vector<geo::Region>& regions,
                                   const GParams& p, Engine engine,
                                   const EngineOptions& opts = {});

// Generating-family consistency (exact equality; box regions keep the
// arithmetic order-canonical, so == is meaningful):
//   compatibility: zero-padding Q with one more region leaves G unchanged
//   symmetry: permuting regions matches permuting Q
bool check_compatibility(const std::vector<geo::Region>& regions,
                         const geo::Region& extra, const std::vector<double>& q,
                         const GParams& p);
bool check_symmetry(const std::vector<geo::Region>& regions,
                    const std::vector<std::size_t>& permutation,
                    const std::vector<double>& q, const GParams& p);

// ---- L2(R^d) elements as simple functions ----

// Piecewise-constant function: value v_k on pairwise-disjoint boxes.
struct GridFunction {
  std::vector<std::pair<geo::Box, double>> cells;

  static GridFunction indicator(const geo::Region& r);
  // uniform grid over `support`: shape gives cells per axis, values in
  // row-major order (last axis fastest)
  static GridFunction on_grid(const geo::Box& support,
                              const std::vector<std::size_t>& shape,
                              std::vector<double> values);

  GridFunction scaled(double c) const;
  std::size_t dim() const { return cells.empty() ? 0 : cells.front().first.dim(); }
  double l2_norm_sq() const;
  double inner(const GridFunction& other) const;
};

// Gram of the integral family: Lambda_ij = <f_i, f_j>_{L2}.  Feeding this
// law to the engines treats the integrals exactly like region variables.
geo::GramLaw spatial_integral_law(const std::vector<GridFunction>& fs, const GParams& p);

// (lhs, rhs) of the isometry E[|I(f)|^2] = sigma_hi^2 ||f||^2; exact for
// simple functions since both sides reduce to the same product.
std::pair<double, double> integral_isometry(const GridFunction& f, const GParams& p);

// ---- sampling diagnostics (one representing measure at a time) ----

// Classical Gaussian field on a 2-D cell lattice over (0,xmax] x (0,ymax]:
// independent cell increments with the policy's per-cell variance,
// aggregated to corner values W_x by rectangle additivity.
struct LatticeEnsemble {
  std::size_t nx = 0, ny = 0;  // cells per axis
  double x_max = 0, y_max = 0;
  std::size_t paths = 0;
  std::vector<double> corners;  // paths x (nx+1) x (ny+1)

  double corner(std::size_t path, std::size_t i, std::size_t j) const {
    return corners[(path * (nx + 1) + i) * (ny + 1) + j];
  }
  double x_at(std::size_t i) const { return x_max * static_cast<double>(i) / static_cast<double>(nx); }
  double y_at(std::size_t j) const { return y_max * static_cast<double>(j) / static_cast<double>(ny); }
};

LatticeEnsemble sample_paths(double x_max, double y_max, std::size_t nx, std::size_t ny,
                             const SigmaPolicy& cell_policy, std::size_t paths,
                             std::uint64_t seed);

// mean and 99% CI of |W_y - W_x|^p over the ensemble for corner indices
McResult increment_moment(const LatticeEnsemble& e, std::size_t i1, std::size_t j1,
                          std::size_t i2, std::size_t j2, int power);

// log-log regression slope of the 6th-moment against corner distance for
// nested diagonal pairs, divided by 6 (an empirical Holder-type exponent)
double holder_exponent_estimate(const LatticeEnsemble& e);

} // namespace gfield
