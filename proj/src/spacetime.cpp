#include "gfield/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "gfield/rng.hpp"
#include "gfield/util.hpp"

namespace gfield {

using phi::TestFunction;

// ---------------------------------------------------------------- model

LayeredModel LayeredModel::make(std::vector<double> times, std::vector<geo::Region> cells,
                                const GParams& p) {
  p.validate();
  if (times.size() < 2 || times.front() != 0.0)
    throw std::invalid_argument("LayeredModel: times must start at 0 and contain a layer");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("LayeredModel: times must strictly increase");
  if (cells.empty()) throw std::invalid_argument("LayeredModel: no cells");

  LayeredModel m;
  m.times = std::move(times);
  m.params = p;
  for (const auto& c : cells) {
    const double lam = geo::measure(c);
    if (!(lam > 0) || !std::isfinite(lam))
      throw std::invalid_argument("LayeredModel: cells need positive finite measure");
    m.cell_measure.push_back(lam);
  }
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      if (geo::intersect_measure(cells[i], cells[j]) != 0.0)
        throw std::invalid_argument("LayeredModel: cells must be pairwise disjoint");
  m.cells = std::move(cells);
  return m;
}

// ---------------------------------------------------------------- functional

struct LayerFunctional::Deferred {
  std::vector<int> vars;  // ascending flat ids
  std::function<double(std::span<const double>)> fn;  // takes coords for vars
  std::map<std::vector<double>, double> cache;
  std::mutex mu;

  double at(std::span<const double> coords) {
    std::vector<double> key(coords.begin(), coords.end());
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    const double v = fn(coords);
    {
      std::lock_guard<std::mutex> lock(mu);
      cache.emplace(std::move(key), v);
    }
    return v;
  }
};

LayerFunctional LayerFunctional::symbolic(TestFunction f) {
  LayerFunctional lf;
  lf.body_ = std::move(f);
  return lf;
}

LayerFunctional LayerFunctional::deferred(std::vector<int> vars,
                                          std::function<double(std::span<const double>)> fn) {
  if (vars.empty() || vars.size() > 3)
    throw std::invalid_argument("LayerFunctional: deferred bodies carry 1..3 variables");
  auto body = std::make_shared<Deferred>();
  body->vars = std::move(vars);
  body->fn = std::move(fn);
  LayerFunctional lf;
  lf.body_ = std::move(body);
  return lf;
}

const TestFunction* LayerFunctional::ast() const {
  return std::get_if<TestFunction>(&body_);
}

std::vector<int> LayerFunctional::referenced_vars() const {
  if (const TestFunction* f = ast()) return f->referenced_vars();
  return std::get<std::shared_ptr<Deferred>>(body_)->vars;
}

LayerFunctional LayerFunctional::negated() const {
  if (const TestFunction* f = ast()) return symbolic(TestFunction::neg(*f));
  auto inner = std::get<std::shared_ptr<Deferred>>(body_);
  return deferred(inner->vars, [inner](std::span<const double> coords) {
    return -inner->at(coords);
  });
}

double LayerFunctional::eval(std::span<const double> full_point) const {
  if (const TestFunction* f = ast()) {
    if (f->arity() == 0) {
      const double z = 0.0;
      return f->eval(std::span<const double>(&z, 0));
    }
    return f->eval(full_point);
  }
  const auto& body = std::get<std::shared_ptr<Deferred>>(body_);
  std::vector<double> coords(body->vars.size());
  for (std::size_t d = 0; d < body->vars.size(); ++d)
    coords[d] = full_point[static_cast<std::size_t>(body->vars[d]) - 1];
  return body->at(coords);
}

// ------------------------------------------------- sign analysis helpers

namespace {

bool node_nonneg(const std::vector<TestFunction::Node>& nodes, int idx);
bool node_nonpos(const std::vector<TestFunction::Node>& nodes, int idx);

bool node_nonneg(const std::vector<TestFunction::Node>& nodes, int idx) {
  using phi::Op;
  const auto& n = nodes[idx];
  switch (n.op) {
    case Op::constant: return n.value >= 0.0;
    case Op::variable: return false;
    case Op::add: return node_nonneg(nodes, n.a) && node_nonneg(nodes, n.b);
    case Op::sub: return node_nonneg(nodes, n.a) && node_nonpos(nodes, n.b);
    case Op::mul:
      return (node_nonneg(nodes, n.a) && node_nonneg(nodes, n.b)) ||
             (node_nonpos(nodes, n.a) && node_nonpos(nodes, n.b));
    case Op::pow: return n.exponent % 2 == 0 || node_nonneg(nodes, n.a);
    case Op::min: return node_nonneg(nodes, n.a) && node_nonneg(nodes, n.b);
    case Op::max: return node_nonneg(nodes, n.a) || node_nonneg(nodes, n.b);
    case Op::abs: return true;
    case Op::neg: return node_nonpos(nodes, n.a);
  }
  return false;
}

bool node_nonpos(const std::vector<TestFunction::Node>& nodes, int idx) {
  using phi::Op;
  const auto& n = nodes[idx];
  switch (n.op) {
    case Op::constant: return n.value <= 0.0;
    case Op::variable: return false;
    case Op::add: return node_nonpos(nodes, n.a) && node_nonpos(nodes, n.b);
    case Op::sub: return node_nonpos(nodes, n.a) && node_nonneg(nodes, n.b);
    case Op::mul:
      return (node_nonneg(nodes, n.a) && node_nonpos(nodes, n.b)) ||
             (node_nonpos(nodes, n.a) && node_nonneg(nodes, n.b));
    case Op::pow: return n.exponent % 2 == 1 && node_nonpos(nodes, n.a);
    case Op::max: return node_nonpos(nodes, n.a) && node_nonpos(nodes, n.b);
    case Op::min: return node_nonpos(nodes, n.a) || node_nonpos(nodes, n.b);
    case Op::abs: return false;
    case Op::neg: return node_nonneg(nodes, n.a);
  }
  return false;
}

bool syntactically_nonneg(const TestFunction& f) {
  return !f.empty() && node_nonneg(f.nodes(), f.root());
}
bool syntactically_nonpos(const TestFunction& f) {
  return !f.empty() && node_nonpos(f.nodes(), f.root());
}

// ------------------------------------------------- layer integration

// integrate the given layer's variables out of F (upper expectation per
// frozen remaining variables)
LayerFunctional integrate_layer(const LayeredModel& model, const LayerFunctional& f,
                                std::size_t layer, const SpaceTimeOptions& opts) {
  const std::vector<int> refs = f.referenced_vars();
  std::vector<int> outer;
  std::vector<int> retained;
  for (int v : refs) {
    if (model.layer_of_var(v) == layer)
      outer.push_back(v);
    else
      retained.push_back(v);
  }
  if (outer.empty()) return f;

  // symbolic fast path: quadratic in the layer variables
  if (const TestFunction* ast = f.ast()) {
    const std::set<int> outer_set(outer.begin(), outer.end());
    if (auto q = phi::decompose_quadratic(*ast, outer_set)) {
      // cross terms (disjoint cells) and linear terms are mean-certain
      // zero and drop; squares contract through 2G(sum c_jj w_j)
      TestFunction s = TestFunction::constant(0.0);
      for (auto& [vars, coeff] : q->quad) {
        if (vars.first != vars.second) continue;
        s = TestFunction::add(std::move(s),
                              TestFunction::scale(coeff, model.var_weight(vars.first)));
      }
      const GParams& p = model.params;
      TestFunction psi;
      if (syntactically_nonneg(s)) {
        psi = TestFunction::add(q->constant_part, TestFunction::scale(s, p.sigma_hi_sq));
      } else if (syntactically_nonpos(s)) {
        psi = TestFunction::add(q->constant_part, TestFunction::scale(s, p.sigma_lo_sq));
      } else {
        TestFunction pos = TestFunction::scale(
            TestFunction::max(s, TestFunction::constant(0.0)), p.sigma_hi_sq);
        TestFunction neg = TestFunction::scale(
            TestFunction::min(std::move(s), TestFunction::constant(0.0)), p.sigma_lo_sq);
        psi = TestFunction::add(q->constant_part,
                                TestFunction::add(std::move(pos), std::move(neg)));
      }
      return LayerFunctional::symbolic(std::move(psi));
    }
  }

  // numeric path: a solver call per queried point of the retained
  // variables, deferred and memoized
  if (outer.size() > 3)
    throw std::invalid_argument("spacetime: more than 3 coupled cells in a non-quadratic layer");
  if (retained.size() > 3)
    throw std::invalid_argument("spacetime: conditional functionals capped at 3 retained variables");

  std::vector<double> weights(outer.size());
  for (std::size_t k = 0; k < outer.size(); ++k) weights[k] = model.var_weight(outer[k]);

  const std::size_t full_len = model.var_count();
  const GParams params = model.params;
  const Engine engine = opts.engine;
  const EngineOptions inner = opts.inner;

  // captured by value: the closure must outlive this call
  auto solve_at = [f, outer, retained, weights, full_len, params, engine,
                   inner](std::span<const double> retained_vals) {
    const Payoff payoff = [&](std::span<const double> y) {
      std::vector<double> full(full_len, 0.0);
      for (std::size_t k = 0; k < retained.size(); ++k)
        full[static_cast<std::size_t>(retained[k]) - 1] = retained_vals[k];
      for (std::size_t k = 0; k < outer.size(); ++k)
        full[static_cast<std::size_t>(outer[k]) - 1] = y[k];
      return f.eval(full);
    };
    return diag_upper(payoff, outer.size(), weights, 1.0, params, engine, inner);
  };

  if (retained.empty()) {
    const double value = solve_at({});
    return LayerFunctional::symbolic(TestFunction::constant(value));
  }
  return LayerFunctional::deferred(retained, std::move(solve_at));
}

std::size_t top_layer(const LayeredModel& model, const LayerFunctional& f, bool forward) {
  const std::vector<int> refs = f.referenced_vars();
  if (refs.empty()) return 0;
  std::size_t best = forward ? model.layers() + 1 : 0;
  for (int v : refs) {
    const std::size_t l = model.layer_of_var(v);
    best = forward ? std::min(best, l) : std::max(best, l);
  }
  return best;
}

double upper_value(const LayeredModel& model, LayerFunctional f,
                   const SpaceTimeOptions& opts) {
  for (;;) {
    const std::size_t layer = top_layer(model, f, opts.forward_order);
    if (layer == 0) break;
    f = integrate_layer(model, f, layer, opts);
  }
  const std::vector<double> zeros(model.var_count(), 0.0);
  return f.eval(zeros);
}

void validate_arity(const LayeredModel& model, const TestFunction& f) {
  if (static_cast<std::size_t>(f.arity()) > model.var_count())
    throw std::invalid_argument("spacetime: payoff references a variable outside the model");
}

} // namespace

// ---------------------------------------------------------------- api

SublinearValue expectation(const LayeredModel& model, const CylinderFunctional& x,
                           const SpaceTimeOptions& opts) {
  validate_arity(model, x.f);
  return expectation(model, LayerFunctional::symbolic(x.f), opts);
}

SublinearValue expectation(const LayeredModel& model, const LayerFunctional& x,
                           const SpaceTimeOptions& opts) {
  const double upper = upper_value(model, x, opts);
  const double lower = -upper_value(model, x.negated(), opts);
  return {upper, lower};
}

LayerFunctional conditional_expectation(const LayeredModel& model,
                                        const CylinderFunctional& x, double t,
                                        const SpaceTimeOptions& opts) {
  validate_arity(model, x.f);
  return conditional_expectation(model, LayerFunctional::symbolic(x.f), t, opts);
}

LayerFunctional conditional_expectation(const LayeredModel& model,
                                        const LayerFunctional& x, double t,
                                        const SpaceTimeOptions& opts) {
  if (opts.forward_order)
    throw std::invalid_argument("conditional_expectation: forward order is not defined");
  if (t < 0) throw std::invalid_argument("conditional_expectation: negative time");

  // largest j with t_j <= t: layers 1..j are measurable
  std::size_t j = 0;
  while (j + 1 < model.times.size() && model.times[j + 1] <= t) ++j;

  if (t > model.times[j] && j < model.layers()) {
    // t cuts through slab j+1; refuse if X depends on that slab
    for (int v : x.referenced_vars())
      if (model.layer_of_var(v) == j + 1)
        throw std::invalid_argument(
            "conditional_expectation: time cuts through a slab the functional depends on");
  }

  LayerFunctional f = x;
  for (;;) {
    const std::size_t layer = top_layer(model, f, false);
    if (layer <= j) break;
    f = integrate_layer(model, f, layer, opts);
  }
  return f;
}

// ---------------------------------------------------------------- integrals

SimpleAdaptedProcess SimpleAdaptedProcess::constant(const LayeredModel& model, double value) {
  SimpleAdaptedProcess f;
  f.coeff.assign(model.layers(),
                 std::vector<TestFunction>(model.cell_count(), TestFunction::constant(value)));
  return f;
}

namespace {

void validate_process(const LayeredModel& model, const SimpleAdaptedProcess& f) {
  if (f.coeff.size() != model.layers())
    throw std::invalid_argument("SimpleAdaptedProcess: one coefficient row per layer required");
  for (std::size_t i = 1; i <= model.layers(); ++i) {
    if (f.coeff[i - 1].size() != model.cell_count())
      throw std::invalid_argument("SimpleAdaptedProcess: one coefficient per cell required");
    const int bound = static_cast<int>((i - 1) * model.cell_count());
    for (const TestFunction& c : f.coeff[i - 1])
      for (int v : c.referenced_vars())
        if (v > bound)
          throw std::invalid_argument(
              "SimpleAdaptedProcess: coefficient on slab " + std::to_string(i) +
              " references layer-" + std::to_string(model.layer_of_var(v)) +
              " information (not adapted)");
  }
}

} // namespace

CylinderFunctional ito_integral_range(const LayeredModel& model,
                                      const SimpleAdaptedProcess& f,
                                      std::size_t from_layer, std::size_t to_layer) {
  validate_process(model, f);
  if (from_layer < 1 || to_layer > model.layers() || from_layer > to_layer)
    throw std::invalid_argument("ito_integral_range: bad layer range");
  TestFunction sum = TestFunction::constant(0.0);
  for (std::size_t i = from_layer; i <= to_layer; ++i)
    for (std::size_t jcell = 1; jcell <= model.cell_count(); ++jcell) {
      TestFunction term = TestFunction::mul(
          f.coeff[i - 1][jcell - 1], TestFunction::variable(model.var_index(i, jcell)));
      sum = TestFunction::add(std::move(sum), std::move(term));
    }
  return {std::move(sum)};
}

CylinderFunctional ito_integral(const LayeredModel& model, const SimpleAdaptedProcess& f) {
  return ito_integral_range(model, f, 1, model.layers());
}

CylinderFunctional bohner_integral(const LayeredModel& model, const SimpleAdaptedProcess& f) {
  validate_process(model, f);
  TestFunction sum = TestFunction::constant(0.0);
  for (std::size_t i = 1; i <= model.layers(); ++i)
    for (std::size_t jcell = 1; jcell <= model.cell_count(); ++jcell) {
      const double w = model.layer_dt(i) * model.cell_measure[jcell - 1];
      sum = TestFunction::add(std::move(sum),
                              TestFunction::scale(f.coeff[i - 1][jcell - 1], w));
    }
  return {std::move(sum)};
}

namespace {

TestFunction squared_coefficient_mass(const LayeredModel& model,
                                      const SimpleAdaptedProcess& f) {
  TestFunction sum = TestFunction::constant(0.0);
  for (std::size_t i = 1; i <= model.layers(); ++i)
    for (std::size_t jcell = 1; jcell <= model.cell_count(); ++jcell) {
      const double w = model.layer_dt(i) * model.cell_measure[jcell - 1];
      sum = TestFunction::add(
          std::move(sum),
          TestFunction::scale(TestFunction::pow(f.coeff[i - 1][jcell - 1], 2), w));
    }
  return sum;
}

} // namespace

double m2_norm(const LayeredModel& model, const SimpleAdaptedProcess& f,
               const SpaceTimeOptions& opts) {
  validate_process(model, f);
  const SublinearValue v = expectation(model, {squared_coefficient_mass(model, f)}, opts);
  return std::sqrt(std::max(v.upper, 0.0));
}

CheckReport integral_property_suite(const LayeredModel& model,
                                    const SimpleAdaptedProcess& f,
                                    const SpaceTimeOptions& opts) {
  validate_process(model, f);
  CheckReport report;
  const std::size_t n = model.layers();
  RngStream rng(20240517u);

  auto random_point = [&](std::vector<double>& pt) {
    pt.assign(model.var_count(), 0.0);
    for (std::size_t v = 1; v <= model.var_count(); ++v) {
      const double sd = model.params.sigma_hi() *
                        std::sqrt(model.var_weight(static_cast<int>(v)));
      pt[v - 1] = 1.5 * sd * (2.0 * rng.uniform() - 1.0);
    }
  };

  // zero mean of the full integral
  const CylinderFunctional integral = ito_integral(model, f);
  const SublinearValue mean = expectation(model, integral, opts);
  report.add("integral_mean_upper", mean.upper, 0.0, 1e-8);
  report.add("integral_mean_lower", mean.lower, 0.0, 1e-8);

  // L2 domination: E[I(f)^2] <= sigma_hi^2 E[int f^2]
  const CylinderFunctional square{TestFunction::pow(integral.f, 2)};
  const double lhs = expectation(model, square, opts).upper;
  const double rhs = model.params.sigma_hi_sq *
                     expectation(model, {squared_coefficient_mass(model, f)}, opts).upper;
  report.add("l2_domination_slack", std::min(rhs - lhs, 0.0), 0.0, 1e-3);

  // interval additivity and left-linearity, pointwise on random draws
  if (n >= 2) {
    const std::size_t mid = n / 2;
    const CylinderFunctional whole = ito_integral_range(model, f, 1, n);
    const CylinderFunctional front = ito_integral_range(model, f, 1, mid);
    const CylinderFunctional back = ito_integral_range(model, f, mid + 1, n);
    double worst = 0.0;
    std::vector<double> pt;
    for (int k = 0; k < 32; ++k) {
      random_point(pt);
      const double a = whole.f.eval(pt);
      const double b = front.f.eval(pt) + back.f.eval(pt);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    report.add("interval_additivity", worst, 0.0, 1e-12);

    // alpha bounded and measurable at the split time
    TestFunction alpha = TestFunction::min(TestFunction::abs(TestFunction::variable(1)),
                                           TestFunction::constant(2.0));
    SimpleAdaptedProcess g = SimpleAdaptedProcess::constant(model, 0.5);
    SimpleAdaptedProcess combo = g;
    for (std::size_t i = mid + 1; i <= n; ++i)
      for (std::size_t j = 0; j < model.cell_count(); ++j)
        combo.coeff[i - 1][j] =
            TestFunction::add(TestFunction::mul(alpha, f.coeff[i - 1][j]), g.coeff[i - 1][j]);
    const CylinderFunctional lhs_int = ito_integral_range(model, combo, mid + 1, n);
    const CylinderFunctional f_tail = ito_integral_range(model, f, mid + 1, n);
    const CylinderFunctional g_tail = ito_integral_range(model, g, mid + 1, n);
    worst = 0.0;
    for (int k = 0; k < 32; ++k) {
      random_point(pt);
      const double a = lhs_int.f.eval(pt);
      const double b = alpha.eval(pt) * f_tail.f.eval(pt) + g_tail.f.eval(pt);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    report.add("left_linearity", worst, 0.0, 1e-12);

    // E[ int_r^T | F_r ] = 0
    const double r = model.times[mid];
    const LayerFunctional cond = conditional_expectation(model, back, r, opts);
    worst = 0.0;
    for (int k = 0; k < 32; ++k) {
      random_point(pt);
      worst = std::max(worst, std::abs(cond.eval(pt)));
    }
    report.add("tail_conditional_zero", worst, 0.0, 1e-8);

    // martingale: E[ int_0^T | F_s ] = int_0^s
    const LayerFunctional mart = conditional_expectation(model, whole, r, opts);
    worst = 0.0;
    for (int k = 0; k < 32; ++k) {
      random_point(pt);
      worst = std::max(worst, std::abs(mart.eval(pt) - front.f.eval(pt)));
    }
    report.add("martingale_identity", worst, 0.0, 1e-3);
  }

  return report;
}

// ------------------------------------------------- conditional axioms

namespace {

TestFunction random_payoff(RngStream& rng, std::size_t var_count, bool allow_kink) {
  auto rnd_var = [&] {
    return TestFunction::variable(1 + static_cast<int>(rng.next_u64() % var_count));
  };
  auto rnd_const = [&] { return TestFunction::constant(2.0 * rng.uniform() - 1.0); };
  const std::uint64_t pick = rng.next_u64() % (allow_kink ? 6 : 4);
  switch (pick) {
    case 0: return TestFunction::add(TestFunction::pow(rnd_var(), 2), rnd_const());
    case 1: return TestFunction::mul(rnd_var(), rnd_var());
    case 2:
      return TestFunction::add(TestFunction::mul(rnd_const(), rnd_var()),
                               TestFunction::pow(rnd_var(), 2));
    case 3: return TestFunction::add(rnd_var(), rnd_const());
    case 4: return TestFunction::max(rnd_var(), rnd_const());
    default: return TestFunction::abs(rnd_var());
  }
}

} // namespace

CheckReport conditional_axiom_suite(std::size_t draws, std::uint64_t seed,
                                    const GParams& p, const SpaceTimeOptions& opts) {
  CheckReport report;
  RngStream rng(seed);

  double worst_mono = 0.0, worst_trivial = 0.0, worst_subadd = 0.0, worst_homog = 0.0,
         worst_tower = 0.0;

  for (std::size_t draw = 0; draw < draws; ++draw) {
    // 2 or 3 layers, one unit cell, dyadic times
    const std::size_t layers = 2 + rng.next_u64() % 2;
    std::vector<double> times{0.0};
    for (std::size_t i = 1; i <= layers; ++i) times.push_back(times.back() + 0.5);
    geo::Box cell;
    cell.lo = {0.0};
    cell.hi = {1.0};
    const LayeredModel model = LayeredModel::make(times, {geo::Region::box(cell)}, p);
    const std::size_t nv = model.var_count();

    const bool kink = draw % 5 == 0;
    const TestFunction x = random_payoff(rng, nv, kink);
    const TestFunction y = random_payoff(rng, nv, kink);
    const double t = model.times[1];  // condition on the first layer

    std::vector<double> pt(nv, 0.0);
    auto draw_point = [&] {
      for (std::size_t v = 1; v <= nv; ++v) {
        const double sd = p.sigma_hi() * std::sqrt(model.var_weight(static_cast<int>(v)));
        pt[v - 1] = 1.5 * sd * (2.0 * rng.uniform() - 1.0);
      }
    };

    const LayerFunctional cx = conditional_expectation(model, {x}, t, opts);
    const LayerFunctional cy = conditional_expectation(model, {y}, t, opts);
    const LayerFunctional cnx =
        conditional_expectation(model, {TestFunction::neg(x)}, t, opts);

    // (i) monotonicity via the dominating payoff max(x,y)
    const TestFunction bigger = TestFunction::max(x, y);
    const LayerFunctional cbig = conditional_expectation(model, {bigger}, t, opts);
    // (iii) sub-additivity
    const LayerFunctional csum =
        conditional_expectation(model, {TestFunction::add(x, y)}, t, opts);
    // (iv) eta-split with eta measurable at t
    const TestFunction eta =
        TestFunction::add(TestFunction::variable(1), TestFunction::constant(0.25));
    const LayerFunctional ceta_x =
        conditional_expectation(model, {TestFunction::mul(eta, x)}, t, opts);
    // (ii) triviality
    const TestFunction measurable = TestFunction::pow(TestFunction::variable(1), 2);
    const LayerFunctional cm = conditional_expectation(model, {measurable}, t, opts);
    // (v) tower against the plain expectation
    const double tower_direct = expectation(model, {x}, opts).upper;
    const double tower_nested = expectation(model, cx, opts).upper;
    worst_tower = std::max(worst_tower, std::abs(tower_direct - tower_nested) /
                                            std::max(1.0, std::abs(tower_direct)));

    for (int k = 0; k < 8; ++k) {
      draw_point();
      const double vx = cx.eval(pt);
      const double vy = cy.eval(pt);
      worst_mono = std::max(worst_mono, vy - cbig.eval(pt));
      worst_trivial = std::max(worst_trivial, std::abs(cm.eval(pt) - measurable.eval(pt)));
      worst_subadd = std::max(worst_subadd, csum.eval(pt) - (vx + vy));
      const double e = eta.eval(pt);
      const double rhs = std::max(e, 0.0) * vx + std::max(-e, 0.0) * cnx.eval(pt);
      worst_homog = std::max(worst_homog, std::abs(ceta_x.eval(pt) - rhs) /
                                              std::max(1.0, std::abs(rhs)));
    }
  }

  report.add("cond_monotonicity", worst_mono, 0.0, 1e-3);
  report.add("cond_triviality", worst_trivial, 0.0, 1e-3);
  report.add("cond_subadditivity", worst_subadd, 0.0, 1e-3);
  report.add("cond_homogeneity_split", worst_homog, 0.0, 1e-3);
  report.add("cond_tower", worst_tower, 0.0, 1e-3);
  return report;
}

} // namespace gfield
