#include "gfield/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gfield/rng.hpp"
#include "gfield/util.hpp"

namespace gfield {

namespace {
constexpr double kMomentRelTol = 5e-3;       // engine-backed moment identities
constexpr double kCrossTolFactor = 5e-3;     // |E[W1 W2]| < 5e-3 sqrt(l1 l2)
constexpr double kQuadFallbackTol = 1e-6;    // quadratic identity via solver
constexpr std::size_t kMaxLatticeCells = 1000000;
constexpr double kNormal99 = 2.5758293035489004;
} // namespace

FieldLaw make_field_law(std::vector<geo::Region> regions, const GParams& p) {
  FieldLaw fl;
  fl.law = geo::gram_matrix(regions, p);
  fl.regions = std::move(regions);
  return fl;
}

// ---------------------------------------------------------------- axioms

namespace {

// E of the quadratic form x^T Q x under the law: 2 G(<Q, Lambda>); report
// the Gram contraction so callers can short-circuit exact zeros.
double quadratic_gram_value(const std::vector<double>& q, const geo::GramLaw& law,
                            double* contraction) {
  const double c = geo::contract_sorted(q, law);
  if (contraction) *contraction = c;
  return 2.0 * g_scalar(c, law.params);
}

} // namespace

CheckReport whitenoise_axiom_suite(const std::vector<geo::Region>& regions,
                                   const GParams& p, Engine engine,
                                   const EngineOptions& opts) {
  p.validate();
  CheckReport report;
  const std::size_t n = regions.size();
  const geo::GramLaw law = geo::gram_matrix(regions, p);

  // (i) second-moment band per region, via the chosen engine
  for (std::size_t i = 0; i < n; ++i) {
    const double lam = law.at(i, i);
    std::vector<geo::Region> single{regions[i]};
    const geo::GramLaw li = geo::gram_matrix(single, p);
    const SublinearValue v = law_expectation(li, phi::parse("x1^2"), 1.0, engine, opts);
    const double tol_up = kMomentRelTol * std::max(1.0, p.sigma_hi_sq * lam);
    const double tol_dn = kMomentRelTol * std::max(1.0, p.sigma_lo_sq * lam);
    report.add("moment_upper[A" + std::to_string(i + 1) + "]", v.upper,
               p.sigma_hi_sq * lam, tol_up);
    report.add("moment_lower[A" + std::to_string(i + 1) + "]", v.lower,
               p.sigma_lo_sq * lam, tol_dn);
  }

  // pair identities
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lam_ij = geo::intersect_measure(regions[i], regions[j]);
      const std::string tag = "[A" + std::to_string(i + 1) + ",A" + std::to_string(j + 1) + "]";
      if (lam_ij == 0.0) {
        // disjoint: signed cross moments vanish
        std::vector<geo::Region> pair{regions[i], regions[j]};
        const geo::GramLaw lp = geo::gram_matrix(pair, p);
        const SublinearValue cross = law_expectation(lp, phi::parse("x1*x2"), 1.0, engine, opts);
        const double tol =
            kCrossTolFactor * std::sqrt(std::max(lp.at(0, 0) * lp.at(1, 1), 1e-30));
        report.add("cross_upper" + tag, cross.upper, 0.0, tol);
        report.add("cross_lower" + tag, cross.lower, 0.0, tol);

        // additivity defect (W_{A u B} - W_A - W_B)^2 at Gram level
        std::vector<geo::Region> triple{regions[i], regions[j],
                                        geo::Region::unite(regions[i], regions[j])};
        const geo::GramLaw lt = geo::gram_matrix(triple, p);
        const std::vector<double> q = {1, 1, -1, 1, 1, -1, -1, -1, 1};
        double contraction = 0.0;
        const double value = quadratic_gram_value(q, lt, &contraction);
        CheckItem& item = report.add("additivity_defect" + tag, value, 0.0,
                                     contraction == 0.0 ? 0.0 : kQuadFallbackTol);
        item.gram_exact = contraction == 0.0;
      } else {
        // overlapping: modularity defect (W_{AuB} + W_{AnB} - W_A - W_B)^2
        std::vector<geo::Region> quad{geo::Region::unite(regions[i], regions[j]),
                                      geo::intersect(regions[i], regions[j]), regions[i],
                                      regions[j]};
        const geo::GramLaw lq = geo::gram_matrix(quad, p);
        const std::vector<double> q = {1,  1,  -1, -1, 1,  1,  -1, -1,
                                       -1, -1, 1,  1,  -1, -1, 1,  1};
        double contraction = 0.0;
        const double value = quadratic_gram_value(q, lq, &contraction);
        CheckItem& item = report.add("modularity_defect" + tag, value, 0.0,
                                     contraction == 0.0 ? 0.0 : kQuadFallbackTol);
        item.gram_exact = contraction == 0.0;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------- consistency

bool check_compatibility(const std::vector<geo::Region>& regions,
                         const geo::Region& extra, const std::vector<double>& q,
                         const GParams& p) {
  const std::size_t n = regions.size();
  if (q.size() != n * n) throw std::invalid_argument("check_compatibility: Q size mismatch");
  const geo::GramLaw small = geo::gram_matrix(regions, p);

  std::vector<geo::Region> bigger = regions;
  bigger.push_back(extra);
  const geo::GramLaw big = geo::gram_matrix(bigger, p);

  std::vector<double> padded((n + 1) * (n + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) padded[i * (n + 1) + j] = q[i * n + j];

  const double lhs = g_scalar(geo::contract_sorted(padded, big), p);
  const double rhs = g_scalar(geo::contract_sorted(q, small), p);
  return lhs == rhs;
}

bool check_symmetry(const std::vector<geo::Region>& regions,
                    const std::vector<std::size_t>& permutation,
                    const std::vector<double>& q, const GParams& p) {
  const std::size_t n = regions.size();
  if (permutation.size() != n) throw std::invalid_argument("check_symmetry: bad permutation");
  if (q.size() != n * n) throw std::invalid_argument("check_symmetry: Q size mismatch");

  std::vector<geo::Region> permuted;
  permuted.reserve(n);
  for (std::size_t i = 0; i < n; ++i) permuted.push_back(regions[permutation[i]]);
  const geo::GramLaw law_perm = geo::gram_matrix(permuted, p);
  const double lhs = g_scalar(geo::contract_sorted(q, law_perm), p);

  // (pi^{-1}(Q))_{ij} = q_{pi^{-1}(i), pi^{-1}(j)}
  std::vector<std::size_t> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[permutation[i]] = i;
  std::vector<double> q_inv(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q_inv[i * n + j] = q[inv[i] * n + inv[j]];
  const geo::GramLaw law = geo::gram_matrix(regions, p);
  const double rhs = g_scalar(geo::contract_sorted(q_inv, law), p);
  return lhs == rhs;
}

// ---------------------------------------------------------------- L2 elements

GridFunction GridFunction::indicator(const geo::Region& r) {
  if (r.has_polygons())
    throw std::invalid_argument("GridFunction: indicator requires a box region");
  GridFunction f;
  for (const geo::Box& b : r.disjoint_box_parts()) f.cells.emplace_back(b, 1.0);
  return f;
}

GridFunction GridFunction::on_grid(const geo::Box& support,
                                   const std::vector<std::size_t>& shape,
                                   std::vector<double> values) {
  support.validate();
  const std::size_t d = support.dim();
  if (shape.size() != d) throw std::invalid_argument("GridFunction: shape/dim mismatch");
  std::size_t total = 1;
  for (std::size_t s : shape) {
    if (s == 0) throw std::invalid_argument("GridFunction: zero cells along an axis");
    total *= s;
  }
  if (values.size() != total) throw std::invalid_argument("GridFunction: value count mismatch");

  GridFunction f;
  f.cells.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (values[flat] == 0.0) continue;  // keep the support sparse
    geo::Box cell;
    cell.lo.resize(d);
    cell.hi.resize(d);
    std::size_t rem = flat;
    for (std::size_t a = d; a-- > 0;) {
      const std::size_t k = rem % shape[a];
      rem /= shape[a];
      const double w = (support.hi[a] - support.lo[a]) / static_cast<double>(shape[a]);
      cell.lo[a] = support.lo[a] + w * static_cast<double>(k);
      cell.hi[a] = support.lo[a] + w * static_cast<double>(k + 1);
    }
    f.cells.emplace_back(std::move(cell), values[flat]);
  }
  return f;
}

GridFunction GridFunction::scaled(double c) const {
  GridFunction f = *this;
  for (auto& [box, v] : f.cells) v *= c;
  return f;
}

double GridFunction::l2_norm_sq() const {
  std::vector<double> terms;
  terms.reserve(cells.size());
  for (const auto& [box, v] : cells) terms.push_back(v * v * box.volume());
  std::sort(terms.begin(), terms.end());
  return pairwise_sum(terms);
}

double GridFunction::inner(const GridFunction& other) const {
  std::vector<double> terms;
  for (const auto& [ba, va] : cells)
    for (const auto& [bb, vb] : other.cells)
      if (auto cap = geo::Box::intersection(ba, bb)) terms.push_back(va * vb * cap->volume());
  std::sort(terms.begin(), terms.end());
  return pairwise_sum(terms);
}

geo::GramLaw spatial_integral_law(const std::vector<GridFunction>& fs, const GParams& p) {
  p.validate();
  if (fs.empty()) throw std::invalid_argument("spatial_integral_law: no functions");
  const std::size_t n = fs.size();
  geo::GramLaw law;
  law.n = n;
  law.params = p;
  law.lambda.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    law.labels.push_back("f" + std::to_string(i + 1));
    law.lambda[i * n + i] = fs[i].l2_norm_sq();
    for (std::size_t j = 0; j < i; ++j) {
      const double ip = fs[i].inner(fs[j]);
      law.lambda[i * n + j] = ip;
      law.lambda[j * n + i] = ip;
    }
  }
  return law;
}

std::pair<double, double> integral_isometry(const GridFunction& f, const GParams& p) {
  p.validate();
  const double nsq = f.l2_norm_sq();
  const double lhs = 2.0 * g_scalar(nsq, p);
  const double rhs = p.sigma_hi_sq * nsq;
  return {lhs, rhs};
}

// ---------------------------------------------------------------- sampling

LatticeEnsemble sample_paths(double x_max, double y_max, std::size_t nx, std::size_t ny,
                             const SigmaPolicy& cell_policy, std::size_t paths,
                             std::uint64_t seed) {
  if (!(x_max > 0) || !(y_max > 0)) throw std::invalid_argument("sample_paths: empty domain");
  if (nx == 0 || ny == 0) throw std::invalid_argument("sample_paths: empty lattice");
  if (nx * ny > kMaxLatticeCells) throw std::invalid_argument("sample_paths: lattice too fine");
  if (cell_policy.steps != 1 || cell_policy.cells != nx * ny)
    throw std::invalid_argument("sample_paths: policy must have one step and nx*ny cells");

  LatticeEnsemble e;
  e.nx = nx;
  e.ny = ny;
  e.x_max = x_max;
  e.y_max = y_max;
  e.paths = paths;
  e.corners.assign(paths * (nx + 1) * (ny + 1), 0.0);

  const double cell_vol = (x_max / static_cast<double>(nx)) * (y_max / static_cast<double>(ny));

  parallel_for(0, paths, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> increments(nx * ny);
    for (std::size_t path = lo; path < hi; ++path) {
      RngStream rng(seed, path);
      for (std::size_t c = 0; c < nx * ny; ++c)
        increments[c] = std::sqrt(cell_policy.at(0, c) * cell_vol) * rng.normal();
      // corner value = 2-D prefix sum of cell increments
      double* corner = &e.corners[path * (nx + 1) * (ny + 1)];
      for (std::size_t i = 1; i <= nx; ++i) {
        for (std::size_t j = 1; j <= ny; ++j) {
          const double inc = increments[(i - 1) * ny + (j - 1)];
          corner[i * (ny + 1) + j] = inc + corner[(i - 1) * (ny + 1) + j] +
                                     corner[i * (ny + 1) + (j - 1)] -
                                     corner[(i - 1) * (ny + 1) + (j - 1)];
        }
      }
    }
  }, 8);
  return e;
}

McResult increment_moment(const LatticeEnsemble& e, std::size_t i1, std::size_t j1,
                          std::size_t i2, std::size_t j2, int power) {
  if (power < 1) throw std::invalid_argument("increment_moment: power must be >= 1");
  std::vector<double> samples(e.paths);
  for (std::size_t path = 0; path < e.paths; ++path) {
    const double d = std::abs(e.corner(path, i2, j2) - e.corner(path, i1, j1));
    double v = 1.0;
    for (int k = 0; k < power; ++k) v *= d;
    samples[path] = v;
  }
  const double mean = pairwise_sum(samples) / static_cast<double>(e.paths);
  std::vector<double> sq(e.paths);
  for (std::size_t i = 0; i < e.paths; ++i) {
    const double d = samples[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(e.paths - 1);
  return {mean, kNormal99 * std::sqrt(var / static_cast<double>(e.paths)), e.paths};
}

double holder_exponent_estimate(const LatticeEnsemble& e) {
  // nested diagonal pairs anchored near mid-domain
  const std::size_t base_i = e.nx / 2;
  const std::size_t base_j = e.ny / 2;
  const std::size_t max_k = std::min(e.nx - base_i, e.ny - base_j);
  if (max_k < 3) throw std::invalid_argument("holder_exponent_estimate: lattice too small");

  std::vector<double> log_dist, log_moment;
  for (std::size_t k = 1; k < max_k; ++k) {
    const McResult m = increment_moment(e, base_i, base_j, base_i + k, base_j + k, 6);
    if (m.estimate <= 0) continue;
    const double dx = e.x_at(base_i + k) - e.x_at(base_i);
    const double dy = e.y_at(base_j + k) - e.y_at(base_j);
    log_dist.push_back(0.5 * std::log(dx * dx + dy * dy));
    log_moment.push_back(std::log(m.estimate));
  }
  const std::size_t n = log_dist.size();
  if (n < 2) throw std::runtime_error("holder_exponent_estimate: degenerate ensemble");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += log_dist[i];
    sy += log_moment[i];
    sxx += log_dist[i] * log_dist[i];
    sxy += log_dist[i] * log_moment[i];
  }
  const double slope = (static_cast<double>(n) * sxy - sx * sy) /
                       (static_cast<double>(n) * sxx - sx * sx);
  return slope / 6.0;
}

} // namespace gfield
