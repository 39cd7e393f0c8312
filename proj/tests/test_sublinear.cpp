#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfield/engine.hpp"
#include "gfield/linalg.hpp"
#include "gfield/rng.hpp"

using namespace gfield;

namespace {

// independent oracle: classical Gaussian expectation by quadrature
double classical_moment(int power, double sigma_sq, double t, std::size_t order = 40) {
  const auto gh = linalg::gauss_hermite(order);
  const double s = std::sqrt(sigma_sq * t);
  double acc = 0.0;
  for (std::size_t i = 0; i < gh.points.size(); ++i) {
    double v = 1.0;
    for (int k = 0; k < power; ++k) v *= s * gh.points[i];
    acc += gh.weights[i] * v;
  }
  return acc;
}

} // namespace

TEST_CASE("g_scalar closed form") {
  const GParams p{1.0, 2.0};
  CHECK(g_scalar(1.0, p) == 1.0);
  CHECK(g_scalar(-1.0, p) == -0.5);
  CHECK(g_scalar(0.0, p) == 0.0);
  CHECK(g_scalar(0.0, GParams{0.0, 7.0}) == 0.0);
}

TEST_CASE("g_scalar is sublinear, homogeneous, monotone") {
  const GParams p{0.7, 3.1};
  RngStream rng(11);
  for (int k = 0; k < 500; ++k) {
    const double a = 10.0 * (2.0 * rng.uniform() - 1.0);
    const double b = 10.0 * (2.0 * rng.uniform() - 1.0);
    const double rhs = g_scalar(a, p) + g_scalar(b, p);
    CHECK(g_scalar(a + b, p) <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
    const double lam = 5.0 * rng.uniform();
    CHECK(g_scalar(lam * a, p) == doctest::Approx(lam * g_scalar(a, p)).epsilon(1e-14));
    if (a >= b) CHECK(g_scalar(a, p) >= g_scalar(b, p));
  }
}

TEST_CASE("even moments anchor values") {
  CHECK(gnormal_even_moment(1, 1.0, GParams{1.0, 2.0}).upper == doctest::Approx(2.0));
  CHECK(gnormal_even_moment(3, 1.0, GParams{1.0, 1.0}).upper == doctest::Approx(15.0));
  CHECK(gnormal_even_moment(2, 1.0, GParams{1.0, 1.0}).upper == doctest::Approx(3.0));
  CHECK_THROWS_AS(gnormal_even_moment(0, 1.0, GParams{1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("general even moments verified against two independent routes") {
  // convexity selects the extreme volatility: classical quadrature at the
  // band edge and the scenario DP must both reproduce the closed form
  const GParams p{1.0, 4.0};
  for (int k = 1; k <= 4; ++k) {
    const SublinearValue m = gnormal_even_moment(k, 1.0, p);
    CHECK(m.upper == doctest::Approx(classical_moment(2 * k, p.sigma_hi_sq, 1.0)).epsilon(1e-10));
    CHECK(m.lower == doctest::Approx(classical_moment(2 * k, p.sigma_lo_sq, 1.0)).epsilon(1e-10));
  }
  DpSpec spec;
  CHECK(dp_upper_expectation(phi::parse("x1^4"), {1.0}, 1.0, p, spec) ==
        doctest::Approx(gnormal_even_moment(2, 1.0, p).upper).epsilon(2e-3));
  CHECK(-dp_upper_expectation(phi::parse("-(x1^4)"), {1.0}, 1.0, p, spec) ==
        doctest::Approx(gnormal_even_moment(2, 1.0, p).lower).epsilon(2e-3));
}

TEST_CASE("moment scaling in t is an exact arithmetic identity") {
  const GParams p{0.5, 2.5};
  for (int k = 1; k <= 5; ++k) {
    const double scale = std::pow(4.0, k);
    CHECK(gnormal_even_moment(k, 4.0, p).upper ==
          doctest::Approx(scale * gnormal_even_moment(k, 1.0, p).upper).epsilon(1e-14));
    CHECK(gnormal_even_moment(k, 4.0, p).lower ==
          doctest::Approx(scale * gnormal_even_moment(k, 1.0, p).lower).epsilon(1e-14));
  }
}

TEST_CASE("degenerate band collapses to the classical moment") {
  const GParams p{1.7, 1.7};
  for (int k = 1; k <= 3; ++k) {
    const SublinearValue m = gnormal_even_moment(k, 0.8, p);
    CHECK(m.upper == m.lower);
    CHECK(m.upper == doctest::Approx(classical_moment(2 * k, 1.7, 0.8)).epsilon(1e-10));
  }
}

TEST_CASE("axiom harness: classical linear expectation passes with zero violation") {
  const ExpectationFn linear = [](const phi::TestFunction& f) {
    const auto gh = linalg::gauss_hermite(40);
    double acc = 0.0;
    for (std::size_t i = 0; i < gh.points.size(); ++i)
      acc += gh.weights[i] * f.eval1(gh.points[i]);
    return acc;
  };
  std::vector<std::pair<phi::TestFunction, phi::TestFunction>> probes;
  RngStream rng(3);
  for (int k = 0; k < 5; ++k) {
    const double a = 2.0 * rng.uniform() - 1.0;
    const double b = 2.0 * rng.uniform() - 1.0;
    probes.emplace_back(
        phi::parse("x1^2"),
        phi::TestFunction::add(phi::TestFunction::scale(phi::parse("x1"), a),
                               phi::TestFunction::constant(b)));
  }
  const AxiomReport rep = check_sublinear_axioms(linear, probes, 1e-9);
  CHECK(rep.all_pass());
  for (const AxiomCheck& c : rep.checks) CHECK(c.worst_violation <= 1e-9);
}

TEST_CASE("axiom harness: PDE-backed expectation satisfies the axioms") {
  const GParams p{1.0, 4.0};
  const geo::GramLaw law = geo::gram_from_matrix({1.0}, 1, p);
  const ExpectationFn ghat = [&](const phi::TestFunction& f) {
    return law_expectation(law, f, 1.0, Engine::pde).upper;
  };
  std::vector<std::pair<phi::TestFunction, phi::TestFunction>> probes;
  probes.emplace_back(phi::parse("x1"), phi::parse("x1^2"));
  probes.emplace_back(phi::parse("max(x1,0)"), phi::parse("abs(x1)"));
  const AxiomReport rep = check_sublinear_axioms(ghat, probes, 1e-2);
  CHECK(rep.all_pass());

  // the worked pair: E[X+Y] <= E[X] + E[Y] for X=x, Y=x^2
  const double ex = ghat(phi::parse("x1"));
  const double ey = ghat(phi::parse("x1^2"));
  const double exy = ghat(phi::parse("x1+x1^2"));
  CHECK(exy <= ex + ey + 1e-6);

  // constant preserving through the solver path
  CHECK(ghat(phi::parse("5")) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("GParams validation") {
  CHECK_THROWS_AS((GParams{-1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GParams{2.0, 1.0}.validate()), std::invalid_argument);
  GParams{0.0, 0.0}.validate();
}
