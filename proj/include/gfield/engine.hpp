#pragma once

#include <optional>

#include "gfield/gheat.hpp"
#include "gfield/oracle.hpp"

// Single entry point for "evaluate this finite-dimensional law" used by
// the field and space-time suites: PDE and DP oracle behind one switch.
namespace gfield {

enum class Engine { pde, oracle };

struct EngineOptions {
  std::optional<GridSpec> grid;        // explicit PDE grid
  std::size_t pde_nodes_per_half = 0;  // 0 = default per rank
  double pde_radius_mult = 8.0;
  DpSpec dp;
};

// E[payoff(W)] for W with the given Gram law; reduction happens here.
SublinearValue law_expectation(const geo::GramLaw& law, const phi::TestFunction& payoff,
                               double t, Engine engine, const EngineOptions& opts = {});

// Same for an already-diagonal law: state has independent-coordinate
// structure diag(lambda) and a callable payoff in original coordinates.
SublinearValue diag_expectation(const Payoff& payoff, std::size_t rank,
                                const std::vector<double>& lambda, double t,
                                const GParams& p, Engine engine,
                                const EngineOptions& opts = {});

double diag_upper(const Payoff& payoff, std::size_t rank,
                  const std::vector<double>& lambda, double t, const GParams& p,
                  Engine engine, const EngineOptions& opts = {});

} // namespace gfield
