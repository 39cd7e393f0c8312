#pragma once

#include <functional>
#include <span>
#include <string>

#include "gfield/geometry.hpp"
#include "gfield/phi.hpp"
#include "gfield/sublinear.hpp"

// Finite-dimensional expectations as time-horizon values of the nonlinear
// heat equation  d_t u = G(Lap u)  in factored coordinates.  The Gram
// matrix Lambda = L L^T is eigen-factored first, so the PDE never needs
// cross-derivative terms: the reduced diffusion is the scalar G of the
// plain Laplacian, discretized with an explicit monotone scheme.
namespace gfield {

using Payoff = std::function<double(std::span<const double>)>;

struct ReducedProblem {
  std::size_t n = 0;     // original variables
  std::size_t rank = 0;  // kept eigen directions
  std::vector<double> factor;  // n x rank, row-major; W = L z
  phi::TestFunction payoff;    // arity <= n
  GParams params;
  double horizon = 1.0;

  double payoff_at(std::span<const double> z) const;  // phi(L z)
  Payoff reduced_payoff() const;
};

// Eigendecomposition of Lambda with rank threshold 1e-12*trace; throws if
// an eigenvalue is below -1e-8*trace (the law would not be PSD).
ReducedProblem reduce(const geo::GramLaw& law, phi::TestFunction payoff, double t);

struct GridSpec {
  double radius = 0.0;  // half-width per reduced coordinate
  double h = 0.0;       // node spacing
  double dt = 0.0;
  std::size_t steps = 0;

  // radius 8*sigma_hi*sqrt(t) per coordinate, spacing radius/nodes_per_half
  // (default 400/120/40 for rank 1/2/3), dt at the CFL bound rounded so
  // steps*dt lands exactly on the horizon
  static GridSpec automatic(std::size_t rank, const GParams& p, double t,
                            std::size_t nodes_per_half = 0, double radius_mult = 8.0);

  void validate(std::size_t rank, const GParams& p, double horizon) const;
  std::string descriptor() const;
};

// One-sided value from the explicit scheme; rank 0 returns payoff(0).
double pde_upper(const Payoff& payoff, std::size_t rank, const GParams& p,
                 double horizon, const GridSpec& gs);

// Both sides: lower = -pde_upper(-payoff).  rank <= 3 enforced here.
SublinearValue solve(const ReducedProblem& rp, const GridSpec& gs);
SublinearValue solve(const ReducedProblem& rp);  // automatic grid

SublinearValue finite_dim_expectation(const std::vector<geo::Region>& regions,
                                      const phi::TestFunction& payoff, double t,
                                      const GParams& p,
                                      const GridSpec* grid_override = nullptr);

} // namespace gfield
