#include "gfield/gheat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gfield/kernels.hpp"
#include "gfield/linalg.hpp"
#include "gfield/util.hpp"

namespace gfield {

namespace {
constexpr std::size_t kDefaultNodes[3] = {400, 120, 40};
constexpr double kRankThresholdRel = 1e-12;
constexpr double kNegEigenRel = 1e-8;
} // namespace

double ReducedProblem::payoff_at(std::span<const double> z) const {
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < rank; ++k) acc += factor[i * rank + k] * z[k];
    x[i] = acc;
  }
  return payoff.eval(x);
}

Payoff ReducedProblem::reduced_payoff() const {
  // copy the pieces so the callable owns its state
  auto factor_copy = factor;
  auto payoff_copy = payoff;
  const std::size_t nn = n, rr = rank;
  return [factor_copy, payoff_copy, nn, rr](std::span<const double> z) {
    std::vector<double> x(nn, 0.0);
    for (std::size_t i = 0; i < nn; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < rr; ++k) acc += factor_copy[i * rr + k] * z[k];
      x[i] = acc;
    }
    return payoff_copy.eval(x);
  };
}

ReducedProblem reduce(const geo::GramLaw& law, phi::TestFunction payoff, double t) {
  law.validate();
  if (t < 0) throw std::invalid_argument("reduce: negative horizon");
  if (static_cast<std::size_t>(payoff.arity()) > law.n)
    throw std::invalid_argument("reduce: payoff arity exceeds number of regions");

  const auto eig = linalg::jacobi_eigen(law.lambda, law.n);
  const double tr = std::max(law.trace(), 0.0);
  for (double v : eig.values)
    if (v < -kNegEigenRel * std::max(tr, 1e-300))
      throw std::invalid_argument("reduce: Gram matrix has a negative eigenvalue");

  const double threshold = kRankThresholdRel * tr;
  std::vector<std::size_t> kept;
  for (std::size_t k = law.n; k-- > 0;)  // descending eigenvalues
    if (eig.values[k] > threshold) kept.push_back(k);

  ReducedProblem rp;
  rp.n = law.n;
  rp.rank = kept.size();
  rp.params = law.params;
  rp.horizon = t;
  rp.payoff = std::move(payoff);
  rp.factor.assign(law.n * rp.rank, 0.0);
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const double s = std::sqrt(eig.values[kept[c]]);
    for (std::size_t i = 0; i < law.n; ++i)
      rp.factor[i * rp.rank + c] = eig.vectors[i * law.n + kept[c]] * s;
  }
  return rp;
}

// ---------------------------------------------------------------- grid

GridSpec GridSpec::automatic(std::size_t rank, const GParams& p, double t,
                             std::size_t nodes_per_half, double radius_mult) {
  p.validate();
  GridSpec gs;
  if (rank == 0 || rank > 3) return gs;  // validated later by solve
  const double spread = p.sigma_hi() * std::sqrt(std::max(t, 0.0));
  gs.radius = spread > 0 ? radius_mult * spread : 1.0;
  const std::size_t m = nodes_per_half ? nodes_per_half : kDefaultNodes[rank - 1];
  gs.h = gs.radius / static_cast<double>(m);
  if (p.sigma_hi_sq > 0 && t > 0) {
    const double dt_max = gs.h * gs.h / (2.0 * static_cast<double>(rank) * p.sigma_hi_sq);
    gs.steps = static_cast<std::size_t>(std::ceil(t / dt_max - 1e-12));
    gs.steps = std::max<std::size_t>(gs.steps, 1);
    gs.dt = t / static_cast<double>(gs.steps);
  } else {
    gs.steps = 1;
    gs.dt = t;
  }
  return gs;
}

void GridSpec::validate(std::size_t rank, const GParams& p, double horizon) const {
  if (rank == 0) return;
  if (!(radius > 0) || !(h > 0) || steps == 0)
    throw std::invalid_argument("GridSpec: radius, h and steps must be positive");
  if (p.sigma_hi_sq > 0) {
    const double cfl = h * h / (2.0 * static_cast<double>(rank) * p.sigma_hi_sq);
    if (dt > cfl * (1.0 + 1e-12))
      throw std::invalid_argument("GridSpec: CFL violated (dt too large for h)");
  }
  if (std::abs(static_cast<double>(steps) * dt - horizon) > 1e-12 * std::max(1.0, horizon))
    throw std::invalid_argument("GridSpec: steps*dt must equal the horizon");
}

std::string GridSpec::descriptor() const {
  return "R=" + std::to_string(radius) + " h=" + std::to_string(h) +
         " dt=" + std::to_string(dt) + " N=" + std::to_string(steps);
}

// ---------------------------------------------------------------- solver

namespace {

struct Lattice {
  std::size_t rank;
  std::size_t half;          // nodes per side of zero
  std::size_t n;             // nodes per axis = 2*half+1
  std::size_t total;
  double h;

  double coord(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(half)) * h;
  }
};

void fill_payoff(const Payoff& payoff, const Lattice& lat, std::vector<double>& u) {
  u.resize(lat.total);
  const std::size_t n = lat.n;
  const std::size_t rank = lat.rank;
  const std::size_t rows = lat.total / n;
  parallel_for(0, rows, [&](std::size_t lo, std::size_t hi) {
    double z[3] = {0, 0, 0};
    for (std::size_t row = lo; row < hi; ++row) {
      std::size_t rem = row;
      for (std::size_t a = rank - 1; a-- > 0;) {
        const std::size_t axis_index = rem % n;
        rem /= n;
        z[a] = lat.coord(axis_index);
      }
      // note: loop above fills axes 0..rank-2 from the row index
      for (std::size_t i = 0; i < n; ++i) {
        z[rank - 1] = lat.coord(i);
        u[row * n + i] = payoff(std::span<const double>(z, rank));
      }
    }
  }, 8);
}

// one explicit step over the interior; boundary rows stay frozen
void step(const Lattice& lat, const std::vector<double>& u, std::vector<double>& lap,
          std::vector<double>& out, double c_up, double c_dn) {
  const std::size_t n = lat.n;
  const double inv_h2 = 1.0 / (lat.h * lat.h);
  const std::size_t span = n - 2;

  if (lat.rank == 1) {
    kernels::stencil_set(lap.data() + 1, u.data() + 1, span, 1, inv_h2);
    kernels::bang_bang_step(out.data() + 1, u.data() + 1, lap.data() + 1, span, c_up, c_dn);
    return;
  }

  if (lat.rank == 2) {
    parallel_for(1, n - 1, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i0 = lo; i0 < hi; ++i0) {
        const std::size_t base = i0 * n + 1;
        kernels::stencil_set(lap.data() + base, u.data() + base, span, 1, inv_h2);
        kernels::stencil_add(lap.data() + base, u.data() + base, span,
                             static_cast<std::ptrdiff_t>(n), inv_h2);
        kernels::bang_bang_step(out.data() + base, u.data() + base, lap.data() + base,
                                span, c_up, c_dn);
      }
    }, 4);
    return;
  }

  parallel_for(1, n - 1, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i0 = lo; i0 < hi; ++i0) {
      for (std::size_t i1 = 1; i1 < n - 1; ++i1) {
        const std::size_t base = (i0 * n + i1) * n + 1;
        kernels::stencil_set(lap.data() + base, u.data() + base, span, 1, inv_h2);
        kernels::stencil_add(lap.data() + base, u.data() + base, span,
                             static_cast<std::ptrdiff_t>(n), inv_h2);
        kernels::stencil_add(lap.data() + base, u.data() + base, span,
                             static_cast<std::ptrdiff_t>(n * n), inv_h2);
        kernels::bang_bang_step(out.data() + base, u.data() + base, lap.data() + base,
                                span, c_up, c_dn);
      }
    }
  }, 1);
}

} // namespace

double pde_upper(const Payoff& payoff, std::size_t rank, const GParams& p,
                 double horizon, const GridSpec& gs) {
  p.validate();
  if (rank == 0) {
    const double z[1] = {0.0};
    return payoff(std::span<const double>(z, 0));
  }
  if (rank > 3)
    throw std::invalid_argument("pde_upper: rank > 3; use the scenario oracle");
  gs.validate(rank, p, horizon);

  Lattice lat;
  lat.rank = rank;
  lat.half = static_cast<std::size_t>(std::llround(gs.radius / gs.h));
  if (lat.half < 2) throw std::invalid_argument("pde_upper: grid too coarse");
  lat.n = 2 * lat.half + 1;
  lat.h = gs.h;
  lat.total = 1;
  for (std::size_t a = 0; a < rank; ++a) lat.total *= lat.n;

  std::vector<double> u;
  fill_payoff(payoff, lat, u);
  for (double v : u)
    if (!std::isfinite(v))
      throw std::runtime_error("pde_upper: payoff not finite on the grid");

  std::vector<double> out = u;  // boundary values stay as the frozen payoff
  std::vector<double> lap(lat.total, 0.0);

  const double c_up = 0.5 * gs.dt * p.sigma_hi_sq;
  const double c_dn = 0.5 * gs.dt * p.sigma_lo_sq;
  for (std::size_t k = 0; k < gs.steps; ++k) {
    step(lat, u, lap, out, c_up, c_dn);
    std::swap(u, out);
  }

  std::size_t center = 0;
  for (std::size_t a = 0; a < rank; ++a) center = center * lat.n + lat.half;
  const double value = u[center];
  if (!std::isfinite(value))
    throw std::runtime_error("pde_upper: scheme produced non-finite values");
  return value;
}

SublinearValue solve(const ReducedProblem& rp, const GridSpec& gs) {
  const Payoff up = rp.reduced_payoff();
  const double upper = pde_upper(up, rp.rank, rp.params, rp.horizon, gs);
  const Payoff dn = [up](std::span<const double> z) { return -up(z); };
  const double lower = -pde_upper(dn, rp.rank, rp.params, rp.horizon, gs);
  return {upper, lower};
}

SublinearValue solve(const ReducedProblem& rp) {
  return solve(rp, GridSpec::automatic(rp.rank, rp.params, rp.horizon));
}

SublinearValue finite_dim_expectation(const std::vector<geo::Region>& regions,
                                      const phi::TestFunction& payoff, double t,
                                      const GParams& p, const GridSpec* grid_override) {
  const geo::GramLaw law = geo::gram_matrix(regions, p);
  const ReducedProblem rp = reduce(law, payoff, t);
  if (grid_override) return solve(rp, *grid_override);
  return solve(rp);
}

} // namespace gfield
