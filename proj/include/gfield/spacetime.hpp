#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <variant>

#include "gfield/engine.hpp"
#include "gfield/report.hpp"

// Spatial-temporal white noise as a layered model: one independent
// G-normal vector per time slab over a disjoint spatial partition.
// Expectations and conditional expectations integrate layers out back to
// front.  A layer whose payoff restriction is (at most) quadratic in that
// layer's variables integrates in closed form at the Gram level : linear
// and cross terms carry certain mean zero and drop, squares contract
// through the scalar G; everything else falls back to a solver sweep
// tabulated over the retained variables.
namespace gfield {

struct LayeredModel {
  std::vector<double> times;       // 0 = t_0 < t_1 < ... < t_n
  std::vector<geo::Region> cells;  // pairwise disjoint, positive finite measure
  GParams params;
  std::vector<double> cell_measure;

  static LayeredModel make(std::vector<double> times, std::vector<geo::Region> cells,
                           const GParams& p);

  std::size_t layers() const { return times.empty() ? 0 : times.size() - 1; }
  std::size_t cell_count() const { return cells.size(); }
  std::size_t var_count() const { return layers() * cell_count(); }
  double layer_dt(std::size_t layer) const {  // layer is 1-based
    return times[layer] - times[layer - 1];
  }
  // layer-major flat variable ids, 1-based: var(i,j) = (i-1)*m + j
  int var_index(std::size_t layer, std::size_t cell) const {
    return static_cast<int>((layer - 1) * cell_count() + cell);
  }
  std::size_t layer_of_var(int var) const {
    return static_cast<std::size_t>(var - 1) / cell_count() + 1;
  }
  std::size_t cell_of_var(int var) const {
    return static_cast<std::size_t>(var - 1) % cell_count() + 1;
  }
  // Gram weight of one increment variable: dt(layer) * |cell|
  double var_weight(int var) const {
    return layer_dt(layer_of_var(var)) * cell_measure[cell_of_var(var) - 1];
  }
};

// A payoff of the model's increments, layer-major flat binding.
struct CylinderFunctional {
  phi::TestFunction f;
};

// Result of integrating layers out: exact AST when every step stayed in
// the quadratic class, else a deferred solver call over the retained
// variables (at most three), evaluated exactly at each queried point and
// memoized.  Deferred bodies stack when several layers need the solver.
class LayerFunctional {
 public:
  struct Deferred;

  static LayerFunctional symbolic(phi::TestFunction f);
  static LayerFunctional deferred(std::vector<int> vars,
                                  std::function<double(std::span<const double>)> fn);

  bool is_symbolic() const { return std::holds_alternative<phi::TestFunction>(body_); }
  const phi::TestFunction* ast() const;

  // full_point is indexed by flat variable id (size >= model var_count)
  double eval(std::span<const double> full_point) const;
  std::vector<int> referenced_vars() const;
  LayerFunctional negated() const;

 private:
  std::variant<phi::TestFunction, std::shared_ptr<Deferred>> body_;
};

struct SpaceTimeOptions {
  Engine engine = Engine::oracle;  // engine for numeric layer integration
  EngineOptions inner;             // solver options for those evaluations
  bool forward_order = false;     // diagnostic: integrate layers front-to-back

  SpaceTimeOptions() {
    inner.dp.steps = 24;
    inner.dp.quad_order = 10;
    inner.dp.lattice_half = 64;
    inner.pde_nodes_per_half = 160;
  }
};

SublinearValue expectation(const LayeredModel& model, const CylinderFunctional& x,
                           const SpaceTimeOptions& opts = {});
SublinearValue expectation(const LayeredModel& model, const LayerFunctional& x,
                           const SpaceTimeOptions& opts = {});

// E[X | F_t]: integrates out the layers after t.  t must not cut through
// a slab whose increment X references (those queries are refused).
LayerFunctional conditional_expectation(const LayeredModel& model,
                                        const CylinderFunctional& x, double t,
                                        const SpaceTimeOptions& opts = {});
LayerFunctional conditional_expectation(const LayeredModel& model,
                                        const LayerFunctional& x, double t,
                                        const SpaceTimeOptions& opts = {});

// Simple adapted process: coeff[i-1][j-1] rides slab i over cell j and may
// reference only variables of layers < i.
struct SimpleAdaptedProcess {
  std::vector<std::vector<phi::TestFunction>> coeff;

  static SimpleAdaptedProcess constant(const LayeredModel& model, double value);
};

// sum_ij X_ij W([t_{i-1},t_i) x A_j); throws if the process is not adapted
CylinderFunctional ito_integral(const LayeredModel& model, const SimpleAdaptedProcess& f);
CylinderFunctional ito_integral_range(const LayeredModel& model,
                                      const SimpleAdaptedProcess& f,
                                      std::size_t from_layer, std::size_t to_layer);

// sum_ij X_ij (t_i - t_{i-1}) |A_j|
CylinderFunctional bohner_integral(const LayeredModel& model, const SimpleAdaptedProcess& f);

// ||f||_{M^2} = E[sum X_ij^2 dt_i |A_j|]^(1/2)
double m2_norm(const LayeredModel& model, const SimpleAdaptedProcess& f,
               const SpaceTimeOptions& opts = {});

// zero mean, L2 domination, interval additivity, left-linearity under a
// bounded adapted factor, vanishing conditional expectation of the tail,
// and the martingale identity of partial integrals
CheckReport integral_property_suite(const LayeredModel& model,
                                    const SimpleAdaptedProcess& f,
                                    const SpaceTimeOptions& opts = {});

// randomized conditional-expectation axioms (i)-(v) on small models
CheckReport conditional_axiom_suite(std::size_t draws, std::uint64_t seed,
                                    const GParams& p,
                                    const SpaceTimeOptions& opts = {});

} // namespace gfield
