#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gfield/phi.hpp"
#include "gfield/sublinear.hpp"

// Independent ground truth: E[X] realized as the maximum over
// piecewise-constant volatility scenarios by backward dynamic programming
// with Gauss-Hermite quadrature, plus classical Monte Carlo under a fixed
// scenario as a statistical lower bound.
namespace gfield {

struct DpSpec {
  std::size_t steps = 200;
  std::size_t quad_order = 20;
  std::vector<double> control_grid;  // variance values; empty = {lo, hi}
  std::size_t lattice_half = 0;      // nodes per side; 0 = default by rank

  void validate(const GParams& p) const;
  std::vector<double> controls(const GParams& p) const;
};

// State is r-dimensional with quadratic-variation weights lambda_j; the
// control is one variance level per time step shared by all coordinates
// (the one-step objective is affine in the variance, so the band endpoints
// suffice -- interior control points exist for the sufficiency test).
double dp_upper_expectation(const phi::TestFunction& payoff,
                            const std::vector<double>& lambda_weights, double t,
                            const GParams& p, const DpSpec& spec = {});

double dp_upper_expectation(const std::function<double(std::span<const double>)>& payoff,
                            std::size_t rank, const std::vector<double>& lambda_weights,
                            double t, const GParams& p, const DpSpec& spec = {});

// One concrete scenario: per-step, per-cell variance choices inside the
// band.  Spatially varying choices are legal for the diagnostic sampler,
// but a joint G-normal layer only dominates scenarios whose variance is
// shared across cells within a step, so mc_lower_bound requires rows to be
// spatially uniform.
struct SigmaPolicy {
  std::size_t steps = 0;
  std::size_t cells = 1;
  std::vector<double> sigma_sq;  // steps*cells, row-major

  static SigmaPolicy constant(double sig_sq, std::size_t steps, std::size_t cells = 1);
  static SigmaPolicy per_step(std::vector<double> sig_sq);

  double at(std::size_t k, std::size_t j) const { return sigma_sq[k * cells + j]; }
  bool spatially_uniform() const;
  void validate(const GParams& p) const;
};

struct McResult {
  double estimate = 0.0;
  double ci_half_width_99 = 0.0;
  std::size_t paths = 0;
};

// Classical mean under the Gaussian law the policy induces; needs >= 100
// paths.  Deterministic for a fixed (seed, policy): per-path substreams
// and a fixed pairwise reduction order.
McResult mc_lower_bound(const phi::TestFunction& payoff, const SigmaPolicy& policy,
                        const std::vector<double>& lambda_weights, double t,
                        const GParams& p, std::size_t paths, std::uint64_t seed);

} // namespace gfield
