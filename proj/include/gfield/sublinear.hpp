#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gfield/phi.hpp"

namespace gfield {

// Volatility ambiguity band: variances range over [sigma_lo_sq, sigma_hi_sq].
struct GParams {
  double sigma_lo_sq = 1.0;
  double sigma_hi_sq = 1.0;

  void validate() const;
  double sigma_hi() const;
  double sigma_lo() const;
  bool degenerate() const { return sigma_lo_sq == sigma_hi_sq; }
};

// The pair (E[X], -E[-X]); lower <= upper for a sublinear expectation.
struct SublinearValue {
  double upper = 0.0;
  double lower = 0.0;
};

// G(a) = 0.5*sigma_hi_sq*a+ - 0.5*sigma_lo_sq*a-.
// Sublinear, positively homogeneous and monotone in a.
double g_scalar(double a, const GParams& p);

// Closed-form even moments of the one-dimensional law with variance
// parameter t: upper = (2k-1)!! * sigma_hi^(2k) * t^k, lower likewise with
// sigma_lo.  The convex payoff x^(2k) is maximized by holding the extreme
// volatility throughout, which reduces both sides to classical Gaussian
// moments.
SublinearValue gnormal_even_moment(int k, double t, const GParams& p);

double double_factorial_odd(int k);  // (2k-1)!!

// ---- axiom harness ----

struct AxiomCheck {
  std::string axiom;
  double worst_violation = 0.0;
  bool pass = true;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool all_pass() const;
};

// Functional under test: phi |-> E[phi(X)] for some fixed underlying X.
using ExpectationFn = std::function<double(const phi::TestFunction&)>;

// Probes the four defining properties on the given payoff pairs:
//   monotonicity       E[max(f,g)] >= E[g]
//   constant preserving E[c] == c
//   sub-additivity      E[f+g] <= E[f] + E[g]
//   positive homogeneity E[lam*f] == lam*E[f], lam >= 0
// Violations beyond `tol` are reported, not thrown.
AxiomReport check_sublinear_axioms(const ExpectationFn& eval,
                                   const std::vector<std::pair<phi::TestFunction, phi::TestFunction>>& probes,
                                   double tol);

} // namespace gfield
