#include "gfield/engine.hpp"

#include <cmath>

namespace gfield {

SublinearValue law_expectation(const geo::GramLaw& law, const phi::TestFunction& payoff,
                               double t, Engine engine, const EngineOptions& opts) {
  const ReducedProblem rp = reduce(law, payoff, t);
  if (engine == Engine::pde) {
    const GridSpec gs = opts.grid ? *opts.grid
                                  : GridSpec::automatic(rp.rank, rp.params, rp.horizon,
                                                        opts.pde_nodes_per_half,
                                                        opts.pde_radius_mult);
    return solve(rp, gs);
  }
  // oracle on the reduced coordinates: unit weights, payoff composed with L
  const std::vector<double> unit(rp.rank, 1.0);
  const Payoff up = rp.reduced_payoff();
  const double upper = dp_upper_expectation(up, rp.rank, unit, t, law.params, opts.dp);
  const Payoff dn = [up](std::span<const double> z) { return -up(z); };
  const double lower = -dp_upper_expectation(dn, rp.rank, unit, t, law.params, opts.dp);
  return {upper, lower};
}

SublinearValue diag_expectation(const Payoff& payoff, std::size_t rank,
                                const std::vector<double>& lambda, double t,
                                const GParams& p, Engine engine,
                                const EngineOptions& opts) {
  const double upper = diag_upper(payoff, rank, lambda, t, p, engine, opts);
  const Payoff dn = [&payoff](std::span<const double> z) { return -payoff(z); };
  const double lower = -diag_upper(dn, rank, lambda, t, p, engine, opts);
  return {upper, lower};
}

double diag_upper(const Payoff& payoff, std::size_t rank,
                  const std::vector<double>& lambda, double t, const GParams& p,
                  Engine engine, const EngineOptions& opts) {
  if (engine == Engine::oracle)
    return dp_upper_expectation(payoff, rank, lambda, t, p, opts.dp);

  // PDE in standardized coordinates: x_j = sqrt(lambda_j) z_j
  std::vector<double> scale(rank);
  for (std::size_t j = 0; j < rank; ++j) scale[j] = std::sqrt(lambda[j]);
  const Payoff composed = [payoff, scale, rank](std::span<const double> z) {
    double x[3] = {0, 0, 0};
    for (std::size_t j = 0; j < rank; ++j) x[j] = scale[j] * z[j];
    return payoff(std::span<const double>(x, rank));
  };
  const GridSpec gs = opts.grid ? *opts.grid
                                : GridSpec::automatic(rank, p, t, opts.pde_nodes_per_half,
                                                      opts.pde_radius_mult);
  return pde_upper(composed, rank, p, t, gs);
}

} // namespace gfield
