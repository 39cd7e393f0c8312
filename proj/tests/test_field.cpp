#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gfield/field.hpp"
#include "gfield/rng.hpp"

using namespace gfield;
using geo::Box;
using geo::Region;

namespace {

Box box1d(double a, double b) {
  Box box;
  box.lo = {a};
  box.hi = {b};
  return box;
}

Box box2d(double ax, double ay, double bx, double by) {
  Box box;
  box.lo = {ax, ay};
  box.hi = {bx, by};
  return box;
}

} // namespace

TEST_CASE("axiom suite on stock geometry") {
  const GParams p{1.0, 3.0};
  const std::vector<Region> regions = {Region::box(box1d(0, 2)), Region::box(box1d(2, 3)),
                                       Region::box(box1d(0.5, 2.5))};
  const CheckReport rep = whitenoise_axiom_suite(regions, p, Engine::pde);
  CHECK(rep.all_pass());

  // the measure-2 region carries E[W^2] = 3 * 2 = 6
  bool found_moment = false, found_additivity = false, found_modularity = false;
  for (const CheckItem& item : rep.items) {
    if (item.name == "moment_upper[A1]") {
      found_moment = true;
      CHECK(item.reference == 6.0);
      CHECK(item.value == doctest::Approx(6.0).epsilon(5e-3));
    }
    if (item.name.rfind("additivity_defect", 0) == 0) {
      found_additivity = true;
      CHECK(item.gram_exact);
      CHECK(item.value == 0.0);
    }
    if (item.name.rfind("modularity_defect", 0) == 0) {
      found_modularity = true;
      CHECK(item.gram_exact);
      CHECK(item.value == 0.0);
    }
  }
  CHECK(found_moment);
  CHECK(found_additivity);
  CHECK(found_modularity);
}

TEST_CASE("consistency checks, randomized") {
  const GParams p{1.0, 4.0};
  RngStream rng(2024);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + rng.next_u64() % 3;
    std::vector<Region> regions;
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = 8.0 * rng.uniform();
      regions.push_back(Region::box(box1d(lo, lo + 0.1 + 3.0 * rng.uniform())));
    }
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double v = 2.0 * rng.uniform() - 1.0;
        q[i * n + j] = v;
        q[j * n + i] = v;
      }
    const double lo = 8.0 * rng.uniform();
    CHECK(check_compatibility(regions, Region::box(box1d(lo, lo + 1.0)), q, p));

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_u64() % i]);
    CHECK(check_symmetry(regions, perm, q, p));
  }
  // identity permutation and zero matrix are trivially consistent
  const std::vector<Region> two = {Region::box(box1d(0, 1)), Region::box(box1d(2, 3))};
  CHECK(check_symmetry(two, {0, 1}, {0, 0.5, 0.5, 0}, p));
  CHECK(check_compatibility(two, Region::box(box1d(5, 6)), {0, 0, 0, 0}, p));
}

TEST_CASE("indicator coherence is exact") {
  const GParams p{1.0, 4.0};
  const Region a = Region::unite(Region::box(box1d(0, 1)), Region::box(box1d(0.5, 2.25)));
  const auto from_integral = spatial_integral_law({GridFunction::indicator(a)}, p);
  const auto from_regions = geo::gram_matrix({a}, p);
  CHECK(from_integral.lambda[0] == from_regions.lambda[0]);
}

TEST_CASE("integral law anchor cases") {
  const GParams p{1.0, 4.0};
  // orthonormal pair with disjoint supports
  const GridFunction f1 = GridFunction::indicator(Region::box(box1d(0, 1)));
  const GridFunction f2 = GridFunction::indicator(Region::box(box1d(1, 2)));
  const auto ortho = spatial_integral_law({f1, f2}, p);
  CHECK(ortho.at(0, 0) == 1.0);
  CHECK(ortho.at(1, 1) == 1.0);
  CHECK(ortho.at(0, 1) == 0.0);

  // f and 2f: rank-one law with the homogeneity pattern
  const GridFunction f = GridFunction::indicator(Region::box(box1d(0, 2))).scaled(0.75);
  const auto hom = spatial_integral_law({f, f.scaled(2.0)}, p);
  const double nsq = f.l2_norm_sq();
  CHECK(nsq == doctest::Approx(2.0 * 0.5625).epsilon(1e-14));
  CHECK(hom.at(0, 0) == doctest::Approx(nsq).epsilon(1e-14));
  CHECK(hom.at(0, 1) == doctest::Approx(2.0 * nsq).epsilon(1e-14));
  CHECK(hom.at(1, 1) == doctest::Approx(4.0 * nsq).epsilon(1e-14));
  const auto rp = reduce(hom, phi::parse("x1+x2"), 1.0);
  CHECK(rp.rank == 1);
}

TEST_CASE("isometry is exact for simple functions") {
  const GParams p{1.0, 4.0};
  const auto [lhs1, rhs1] = integral_isometry(GridFunction::indicator(Region::box(box1d(0, 1))), p);
  CHECK(lhs1 == rhs1);
  CHECK(lhs1 == p.sigma_hi_sq);

  // 3 * 1_A with |A| = 2
  const auto [lhs2, rhs2] =
      integral_isometry(GridFunction::indicator(Region::box(box1d(0, 2))).scaled(3.0), p);
  CHECK(lhs2 == rhs2);
  CHECK(lhs2 == doctest::Approx(18.0 * p.sigma_hi_sq).epsilon(1e-14));

  // two disjoint cells with different values
  GridFunction g;
  g.cells.emplace_back(box1d(0, 1), 2.0);
  g.cells.emplace_back(box1d(1, 4), -0.5);
  const auto [lhs3, rhs3] = integral_isometry(g, p);
  CHECK(lhs3 == rhs3);
  CHECK(lhs3 == doctest::Approx(p.sigma_hi_sq * (4.0 * 1.0 + 0.25 * 3.0)).epsilon(1e-14));
}

TEST_CASE("law-level linearity of the integral") {
  const GParams p{1.0, 4.0};
  const GridFunction f1 = GridFunction::indicator(Region::box(box1d(0, 2))).scaled(1.25);
  const GridFunction f2 = GridFunction::indicator(Region::box(box1d(1, 3))).scaled(-0.5);
  const double a1 = 0.7, a2 = -1.2;
  // ||a1 f1 + a2 f2||^2 via the joint law's quadratic form
  const auto joint = spatial_integral_law({f1, f2}, p);
  const double via_law = a1 * a1 * joint.at(0, 0) + 2 * a1 * a2 * joint.at(0, 1) +
                         a2 * a2 * joint.at(1, 1);
  // direct combination on a common refinement
  GridFunction combo;
  combo.cells.emplace_back(box1d(0, 1), 1.25 * a1);
  combo.cells.emplace_back(box1d(1, 2), 1.25 * a1 - 0.5 * a2);
  combo.cells.emplace_back(box1d(2, 3), -0.5 * a2);
  CHECK(combo.l2_norm_sq() == doctest::Approx(via_law).epsilon(1e-12));
}

TEST_CASE("grid refinement is a Cauchy sequence in the isometry norm") {
  const GParams p{1.0, 4.0};
  // f(x) = x on (0,1], projected onto finer and finer piecewise constants
  auto representative = [](std::size_t cells) {
    std::vector<double> values(cells);
    for (std::size_t k = 0; k < cells; ++k)
      values[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(cells);  // cell average
    return GridFunction::on_grid(box1d(0, 1), {cells}, std::move(values));
  };
  const double target = 1.0 / 3.0;  // ||x||^2 on (0,1]
  double prev_gap = 1e300;
  double prev_norm = -1.0;
  for (const std::size_t cells : {4, 8, 16, 32}) {
    const GridFunction f = representative(cells);
    const double nsq = f.l2_norm_sq();
    CHECK(nsq <= target);
    CHECK(nsq >= prev_norm);  // projections onto nested grids grow in norm
    const double gap = target - nsq;
    CHECK(gap < prev_gap);
    prev_gap = gap;
    prev_norm = nsq;
  }
  // successive representatives get close in the exact integral metric
  const GridFunction a = representative(16);
  const GridFunction b = representative(32);
  const double dist_sq = a.l2_norm_sq() - 2.0 * a.inner(b) + b.l2_norm_sq();
  const double energy = p.sigma_hi_sq * dist_sq;  // E|I(a) - I(b)|^2
  CHECK(energy <= p.sigma_hi_sq * (1.0 / (4.0 * 16 * 16)));
}

TEST_CASE("rotated polygon scenes keep their finite-dimensional law") {
  const GParams p{1.0, 2.0};
  const std::vector<Region> scene = {Region::box(box2d(0, 0, 1, 1)),
                                     Region::box(box2d(1.5, 0.5, 2.5, 1.5))};
  const auto before = geo::gram_matrix(scene, p);
  const double theta = std::numbers::pi / 6;
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<Region> rotated;
  for (const Region& r : scene)
    rotated.push_back(geo::transform_region(r, {0.25, -1.0}, {c, -s, s, c}));
  const auto after = geo::gram_matrix(rotated, p);
  for (std::size_t i = 0; i < before.lambda.size(); ++i)
    CHECK(after.lambda[i] == doctest::Approx(before.lambda[i]).epsilon(1e-9));

  EngineOptions fast;
  fast.pde_nodes_per_half = 80;
  const auto f = phi::parse("max(x1,x2)");
  const auto v1 = law_expectation(before, f, 1.0, Engine::pde, fast);
  const auto v2 = law_expectation(after, f, 1.0, Engine::pde, fast);
  CHECK(v1.upper == doctest::Approx(v2.upper).epsilon(1e-4));
  CHECK(v1.lower == doctest::Approx(v2.lower).epsilon(1e-4));
}

TEST_CASE("sampled field variance and sixth moment under the extreme measure") {
  const GParams p{1.0, 4.0};
  const std::size_t nx = 8, ny = 8, paths = 20000;
  const SigmaPolicy policy = SigmaPolicy::constant(p.sigma_hi_sq, 1, nx * ny);
  const LatticeEnsemble e = sample_paths(2.0, 2.0, nx, ny, policy, paths, 31);

  // Var(W_x) = sigma^2 x1 x2 at the far corner
  const McResult var = increment_moment(e, 0, 0, nx, ny, 2);
  CHECK(std::abs(var.estimate - p.sigma_hi_sq * 4.0) <= var.ci_half_width_99);

  // sixth moment of a nested increment
  const McResult m6 = increment_moment(e, 4, 4, 8, 8, 6);
  const double area_diff = 2.0 * 2.0 - 1.0 * 1.0;
  const double want = 15.0 * std::pow(p.sigma_hi_sq, 3) * std::pow(area_diff, 3);
  CHECK(std::abs(m6.estimate - want) <= m6.ci_half_width_99);

  // moment-scaling regression gives a positive Holder-type exponent
  CHECK(holder_exponent_estimate(e) > 0.2);
}

TEST_CASE("sampler guards") {
  const GParams p{1.0, 4.0};
  CHECK_THROWS_AS(
      sample_paths(1.0, 1.0, 2000, 2000, SigmaPolicy::constant(1.0, 1, 4000000), 10, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(sample_paths(1.0, 1.0, 4, 4, SigmaPolicy::constant(1.0, 2, 16), 10, 1),
                  std::invalid_argument);
}

TEST_CASE("general-position increments track the symmetric-difference measure") {
  const GParams p{1.0, 4.0};
  const std::size_t nx = 10, ny = 10, paths = 20000;
  const SigmaPolicy policy = SigmaPolicy::constant(p.sigma_hi_sq, 1, nx * ny);
  const LatticeEnsemble e = sample_paths(2.0, 2.0, nx, ny, policy, paths, 67);

  // corners x=(1.2,0.4), y=(0.6,1.6): neither nested in the other
  const std::size_t i1 = 6, j1 = 2, i2 = 3, j2 = 8;
  const geo::Region a = Region::box(box2d(0, 0, e.x_at(i1), e.y_at(j1)));
  const geo::Region b = Region::box(box2d(0, 0, e.x_at(i2), e.y_at(j2)));
  const double sym_diff =
      geo::measure(a) + geo::measure(b) - 2.0 * geo::intersect_measure(a, b);
  const McResult var = increment_moment(e, i1, j1, i2, j2, 2);
  CHECK(std::abs(var.estimate - p.sigma_hi_sq * sym_diff) <= var.ci_half_width_99);
}

TEST_CASE("2-D grid functions") {
  geo::Box support;
  support.lo = {0.0, 0.0};
  support.hi = {2.0, 1.0};
  const GridFunction f =
      GridFunction::on_grid(support, {2, 2}, {1.0, 0.0, -1.0, 2.0});
  // cells are 1.0 x 0.5; zero-valued cells are dropped from the support
  CHECK(f.cells.size() == 3);
  CHECK(f.l2_norm_sq() == doctest::Approx(0.5 * (1.0 + 1.0 + 4.0)).epsilon(1e-14));
  // the left half only overlaps the value-1 cell (area 0.5)
  const GridFunction left = GridFunction::indicator(Region::box(box2d(0, 0, 1, 1)));
  CHECK(f.inner(left) == doctest::Approx(0.5).epsilon(1e-14));
  // the right half sees the -1 and +2 cells
  const GridFunction right = GridFunction::indicator(Region::box(box2d(1, 0, 2, 1)));
  CHECK(f.inner(right) == doctest::Approx(0.5 * (-1.0 + 2.0)).epsilon(1e-14));
}

TEST_CASE("axiom suite through the scenario oracle") {
  const GParams p{1.0, 4.0};
  const std::vector<Region> regions = {Region::box(box1d(0, 1)), Region::box(box1d(1, 2))};
  EngineOptions opts;
  opts.dp.steps = 64;
  opts.dp.quad_order = 12;
  const CheckReport rep = whitenoise_axiom_suite(regions, p, Engine::oracle, opts);
  for (const CheckItem& item : rep.items) {
    INFO(item.name, " value=", item.value, " ref=", item.reference);
    CHECK(item.pass);
  }
}
