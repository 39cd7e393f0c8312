#include "gfield/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gfield/kernels.hpp"
#include "gfield/linalg.hpp"
#include "gfield/rng.hpp"
#include "gfield/util.hpp"

namespace gfield {

namespace {
constexpr std::size_t kDefaultLattice[3] = {240, 48, 14};
constexpr double kNormal99 = 2.5758293035489004;
} // namespace

void DpSpec::validate(const GParams& p) const {
  p.validate();
  if (steps < 1) throw std::invalid_argument("DpSpec: steps must be >= 1");
  if (quad_order < 2) throw std::invalid_argument("DpSpec: quad_order must be >= 2");
  for (double c : control_grid)
    if (!(c >= p.sigma_lo_sq - 1e-15) || !(c <= p.sigma_hi_sq + 1e-15))
      throw std::invalid_argument("DpSpec: control outside the variance band");
}

std::vector<double> DpSpec::controls(const GParams& p) const {
  if (!control_grid.empty()) return control_grid;
  if (p.degenerate()) return {p.sigma_hi_sq};
  return {p.sigma_lo_sq, p.sigma_hi_sq};
}

namespace {

// Catmull-Rom weights for fractional offset f in [0,1)
struct CubicTaps {
  double c0, c1, c2, c3;
};
CubicTaps cr_taps(double f) {
  const double f2 = f * f;
  const double f3 = f2 * f;
  return {-0.5 * f3 + f2 - 0.5 * f,
          1.5 * f3 - 2.5 * f2 + 1.0,
          -1.5 * f3 + 2.0 * f2 + 0.5 * f,
          0.5 * f3 - 0.5 * f2};
}

// value at continuous lattice coordinate g (units of spacing), with linear
// extrapolation beyond the ends and linear interpolation in the first and
// last cell where the 4-point stencil does not fit
double interp_line(const double* v, std::size_t n, double g) {
  if (g <= 0.0) return v[0] + g * (v[1] - v[0]);
  const double top = static_cast<double>(n - 1);
  if (g >= top) return v[n - 1] + (g - top) * (v[n - 1] - v[n - 2]);
  const double fl = std::floor(g);
  std::size_t i0 = static_cast<std::size_t>(fl);
  if (i0 >= n - 1) i0 = n - 2;
  const double f = g - static_cast<double>(i0);
  if (i0 < 1 || i0 > n - 3) return v[i0] + f * (v[i0 + 1] - v[i0]);
  const CubicTaps t = cr_taps(f);
  return ((t.c0 * v[i0 - 1] + t.c1 * v[i0]) + (t.c2 * v[i0 + 1] + t.c3 * v[i0 + 2]));
}

// out[i] = sum_q w_q * line(i + off_q), off_q constant per quadrature node
void convolve_line(const double* in, double* out, std::size_t n,
                   std::span<const double> offsets, std::span<const double> weights) {
  std::fill(out, out + n, 0.0);
  for (std::size_t q = 0; q < offsets.size(); ++q) {
    const double off = offsets[q];
    const double w = weights[q];
    const double fl = std::floor(off);
    const long base = static_cast<long>(fl) - 1;  // first tap index for i=0
    const double f = off - fl;
    const CubicTaps t = cr_taps(f);
    // interior range where all four taps and the cubic stencil are valid:
    // need 1 <= i+floor(off) <= n-3
    long lo = 1 - static_cast<long>(fl);
    long hi = static_cast<long>(n) - 3 - static_cast<long>(fl);
    lo = std::max<long>(lo, 0);
    hi = std::min<long>(hi, static_cast<long>(n) - 1);
    if (hi >= lo) {
      kernels::fir4_add(out + lo, in + lo + base,
                        static_cast<std::size_t>(hi - lo + 1),
                        t.c0, t.c1, t.c2, t.c3, w);
      for (long i = 0; i < lo; ++i)
        out[i] += w * interp_line(in, n, static_cast<double>(i) + off);
      for (long i = hi + 1; i < static_cast<long>(n); ++i)
        out[i] += w * interp_line(in, n, static_cast<double>(i) + off);
    } else {
      for (long i = 0; i < static_cast<long>(n); ++i)
        out[i] += w * interp_line(in, n, static_cast<double>(i) + off);
    }
  }
}

struct DpLattice {
  std::size_t rank = 0;
  std::size_t half = 0;
  std::size_t n = 0;
  std::size_t total = 0;
  std::vector<double> h;  // spacing per axis

  double coord(std::size_t axis, std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(half)) * h[axis];
  }
};

// one expectation sweep: w <- E[w(. + s*z)] along `axis` with step scale s
void axis_convolution(const DpLattice& lat, std::vector<double>& cur,
                      std::vector<double>& scratch, std::size_t axis, double s,
                      const linalg::GaussHermite& gh) {
  const std::size_t n = lat.n;
  std::vector<double> offsets(gh.points.size());
  for (std::size_t q = 0; q < gh.points.size(); ++q)
    offsets[q] = gh.points[q] * s / lat.h[axis];

  const std::size_t lines = lat.total / n;
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < lat.rank; ++a) stride *= n;

  parallel_for(0, lines, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> line_in(n), line_out(n);
    for (std::size_t line = lo; line < hi; ++line) {
      // base offset of this line in the flattened array
      std::size_t base;
      if (stride == 1) {
        base = line * n;
      } else {
        const std::size_t block = line / stride;
        const std::size_t within = line % stride;
        base = block * stride * n + within;
      }
      if (stride == 1) {
        convolve_line(cur.data() + base, scratch.data() + base, n, offsets, gh.weights);
      } else {
        for (std::size_t i = 0; i < n; ++i) line_in[i] = cur[base + i * stride];
        convolve_line(line_in.data(), line_out.data(), n, offsets, gh.weights);
        for (std::size_t i = 0; i < n; ++i) scratch[base + i * stride] = line_out[i];
      }
    }
  }, 2);
  std::swap(cur, scratch);
}

} // namespace

double dp_upper_expectation(const std::function<double(std::span<const double>)>& payoff,
                            std::size_t rank, const std::vector<double>& lambda_weights,
                            double t, const GParams& p, const DpSpec& spec) {
  spec.validate(p);
  if (rank == 0) {
    const double z[1] = {0.0};
    return payoff(std::span<const double>(z, 0));
  }
  if (rank > 3)
    throw std::invalid_argument("dp_upper_expectation: tensor quadrature capped at rank 3");
  if (lambda_weights.size() != rank)
    throw std::invalid_argument("dp_upper_expectation: weight count != rank");
  for (double l : lambda_weights)
    if (!(l >= 0) || !std::isfinite(l))
      throw std::invalid_argument("dp_upper_expectation: weights must be nonnegative");
  if (t < 0) throw std::invalid_argument("dp_upper_expectation: negative horizon");

  const std::vector<double> ctrl = spec.controls(p);
  if (t == 0 || p.sigma_hi_sq == 0 ||
      *std::max_element(lambda_weights.begin(), lambda_weights.end()) == 0.0) {
    std::vector<double> zero(rank, 0.0);
    return payoff(zero);
  }

  const linalg::GaussHermite gh = linalg::gauss_hermite(spec.quad_order);
  const double z_max = std::max(std::abs(gh.points.front()), std::abs(gh.points.back()));
  const double dt = t / static_cast<double>(spec.steps);

  DpLattice lat;
  lat.rank = rank;
  lat.half = spec.lattice_half ? spec.lattice_half : kDefaultLattice[rank - 1];
  lat.n = 2 * lat.half + 1;
  lat.total = 1;
  lat.h.resize(rank);
  for (std::size_t a = 0; a < rank; ++a) {
    const double lam = lambda_weights[a];
    // pad for quadrature reach at a reference step count, not the actual
    // one, so the mesh is identical across N-refinement studies
    const double reach = p.sigma_hi() * std::sqrt((t / 32.0) * lam) * z_max;
    const double radius = 8.0 * p.sigma_hi() * std::sqrt(t * lam) + reach;
    lat.h[a] = (radius > 0 ? radius : 1.0) / static_cast<double>(lat.half);
    lat.total *= lat.n;
  }

  // terminal values: exact payoff on the lattice
  std::vector<double> v(lat.total);
  {
    const std::size_t n = lat.n;
    const std::size_t rows = lat.total / n;
    parallel_for(0, rows, [&](std::size_t lo, std::size_t hi) {
      double x[3] = {0, 0, 0};
      for (std::size_t row = lo; row < hi; ++row) {
        std::size_t rem = row;
        for (std::size_t a = rank - 1; a-- > 0;) {
          x[a] = lat.coord(a, rem % n);
          rem /= n;
        }
        for (std::size_t i = 0; i < n; ++i) {
          x[rank - 1] = lat.coord(rank - 1, i);
          v[row * n + i] = payoff(std::span<const double>(x, rank));
        }
      }
    }, 8);
  }

  std::vector<double> work(lat.total), scratch(lat.total), best(lat.total);
  for (std::size_t k = 0; k < spec.steps; ++k) {
    bool first_ctrl = true;
    for (const double sig_sq : ctrl) {
      work = v;
      for (std::size_t a = 0; a < rank; ++a) {
        const double s = std::sqrt(sig_sq * dt * lambda_weights[a]);
        if (s > 0) axis_convolution(lat, work, scratch, a, s, gh);
      }
      if (first_ctrl) {
        best.swap(work);
        first_ctrl = false;
      } else {
        parallel_for(0, lat.total, [&](std::size_t lo, std::size_t hi) {
          for (std::size_t i = lo; i < hi; ++i) best[i] = std::max(best[i], work[i]);
        }, 4096);
      }
    }
    v.swap(best);
  }

  std::size_t center = 0;
  for (std::size_t a = 0; a < rank; ++a) center = center * lat.n + lat.half;
  const double value = v[center];
  if (!std::isfinite(value))
    throw std::runtime_error("dp_upper_expectation: non-finite value (payoff growth too strong)");
  return value;
}

double dp_upper_expectation(const phi::TestFunction& payoff,
                            const std::vector<double>& lambda_weights, double t,
                            const GParams& p, const DpSpec& spec) {
  const std::size_t rank = lambda_weights.size();
  if (static_cast<std::size_t>(payoff.arity()) > rank)
    throw std::invalid_argument("dp_upper_expectation: payoff arity exceeds state dimension");
  auto f = [&payoff](std::span<const double> x) { return payoff.eval(x); };
  return dp_upper_expectation(f, rank, lambda_weights, t, p, spec);
}

// ---------------------------------------------------------------- policy

SigmaPolicy SigmaPolicy::constant(double sig_sq, std::size_t steps, std::size_t cells) {
  SigmaPolicy pol;
  pol.steps = steps;
  pol.cells = cells;
  pol.sigma_sq.assign(steps * cells, sig_sq);
  return pol;
}

SigmaPolicy SigmaPolicy::per_step(std::vector<double> sig_sq) {
  SigmaPolicy pol;
  pol.steps = sig_sq.size();
  pol.cells = 1;
  pol.sigma_sq = std::move(sig_sq);
  return pol;
}

bool SigmaPolicy::spatially_uniform() const {
  for (std::size_t k = 0; k < steps; ++k)
    for (std::size_t j = 1; j < cells; ++j)
      if (at(k, j) != at(k, 0)) return false;
  return true;
}

void SigmaPolicy::validate(const GParams& p) const {
  p.validate();
  if (steps == 0 || cells == 0 || sigma_sq.size() != steps * cells)
    throw std::invalid_argument("SigmaPolicy: shape mismatch");
  for (double s : sigma_sq)
    if (!(s >= p.sigma_lo_sq - 1e-15) || !(s <= p.sigma_hi_sq + 1e-15))
      throw std::invalid_argument("SigmaPolicy: variance outside the band");
}

McResult mc_lower_bound(const phi::TestFunction& payoff, const SigmaPolicy& policy,
                        const std::vector<double>& lambda_weights, double t,
                        const GParams& p, std::size_t paths, std::uint64_t seed) {
  policy.validate(p);
  if (paths < 100) throw std::invalid_argument("mc_lower_bound: need at least 100 paths");
  if (!policy.spatially_uniform())
    throw std::invalid_argument(
        "mc_lower_bound: per-cell variance choices are not dominated scenarios of a "
        "joint layer; use a spatially uniform policy");
  const std::size_t rank = lambda_weights.size();
  if (static_cast<std::size_t>(payoff.arity()) > rank)
    throw std::invalid_argument("mc_lower_bound: payoff arity exceeds state dimension");
  if (t < 0) throw std::invalid_argument("mc_lower_bound: negative horizon");

  const double dt = t / static_cast<double>(policy.steps);
  std::vector<double> values(paths);
  parallel_for(0, paths, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(rank);
    for (std::size_t path = lo; path < hi; ++path) {
      RngStream rng(seed, path);
      std::fill(x.begin(), x.end(), 0.0);
      for (std::size_t k = 0; k < policy.steps; ++k) {
        const double sig_sq = policy.at(k, 0);
        for (std::size_t j = 0; j < rank; ++j)
          x[j] += std::sqrt(sig_sq * dt * lambda_weights[j]) * rng.normal();
      }
      values[path] = payoff.eval(x);
    }
  }, 256);

  const double mean = pairwise_sum(values) / static_cast<double>(paths);
  std::vector<double> sq(paths);
  for (std::size_t i = 0; i < paths; ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(paths - 1);
  const double half = kNormal99 * std::sqrt(var / static_cast<double>(paths));
  return {mean, half, paths};
}

} // namespace gfield
