#include "gfield/jobs.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "gfield/rng.hpp"
#include "gfield/spacetime.hpp"

namespace gfield::jobs {

using nlohmann::json;

namespace {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- config parsing ----

GParams params_from_json(const json& j) {
  if (!j.contains("params")) throw SchemaError("config needs a 'params' object");
  const json& p = j.at("params");
  GParams out;
  out.sigma_lo_sq = p.at("sigma_lo_sq").get<double>();
  out.sigma_hi_sq = p.at("sigma_hi_sq").get<double>();
  out.validate();
  return out;
}

geo::Box box_from_json(const json& j) {
  geo::Box b;
  b.lo = j.at("lo").get<std::vector<double>>();
  b.hi = j.at("hi").get<std::vector<double>>();
  b.validate();
  return b;
}

Engine engine_from_string(const std::string& s) {
  if (s == "pde") return Engine::pde;
  if (s == "oracle") return Engine::oracle;
  throw SchemaError("unknown engine '" + s + "' (expected pde|oracle)");
}

struct GridConfig {
  double h = 0.0;       // 0 = derive from nodes_per_half
  double radius = 0.0;  // 0 = derive from radius_mult
  double dt = 0.0;      // 0 = "auto": largest stable step landing on t
};

EngineOptions engine_options_from_json(const json& j, GridConfig* grid_cfg = nullptr) {
  EngineOptions opts;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.contains("nodes_per_half"))
      opts.pde_nodes_per_half = g.at("nodes_per_half").get<std::size_t>();
    if (g.contains("radius_mult")) opts.pde_radius_mult = g.at("radius_mult").get<double>();
    if (grid_cfg) {
      if (g.contains("h")) grid_cfg->h = g.at("h").get<double>();
      if (g.contains("radius")) grid_cfg->radius = g.at("radius").get<double>();
      if (g.contains("dt") && g.at("dt").is_number()) grid_cfg->dt = g.at("dt").get<double>();
    }
  }
  if (j.contains("dp")) {
    const json& d = j.at("dp");
    if (d.contains("steps")) opts.dp.steps = d.at("steps").get<std::size_t>();
    if (d.contains("quad")) opts.dp.quad_order = d.at("quad").get<std::size_t>();
    if (d.contains("lattice_half")) opts.dp.lattice_half = d.at("lattice_half").get<std::size_t>();
    if (d.contains("controls")) opts.dp.control_grid = d.at("controls").get<std::vector<double>>();
  }
  return opts;
}

// resolve a config grid override against the horizon and the CFL bound
void finalize_grid(EngineOptions& opts, const GridConfig& cfg, std::size_t rank,
                   const GParams& p, double t) {
  if (cfg.h == 0.0 && cfg.radius == 0.0 && cfg.dt == 0.0) return;
  if (rank == 0) return;
  GridSpec gs = GridSpec::automatic(rank, p, t, opts.pde_nodes_per_half, opts.pde_radius_mult);
  if (cfg.radius > 0) gs.radius = cfg.radius;
  if (cfg.h > 0) gs.h = cfg.h;
  const double dt_max = p.sigma_hi_sq > 0 && t > 0
                            ? gs.h * gs.h / (2.0 * static_cast<double>(rank) * p.sigma_hi_sq)
                            : t;
  const double dt_want = cfg.dt > 0 ? std::min(cfg.dt, dt_max) : dt_max;
  gs.steps = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(t / std::max(dt_want, 1e-300) - 1e-12)));
  gs.dt = t / static_cast<double>(gs.steps);
  opts.grid = gs;
}

std::string engine_name(Engine e) { return e == Engine::pde ? "pde" : "oracle"; }

std::string grid_descriptor(Engine e, const EngineOptions& opts, std::size_t rank,
                            const GParams& p, double t) {
  if (e == Engine::pde) {
    const GridSpec gs = opts.grid ? *opts.grid
                                  : GridSpec::automatic(rank, p, t, opts.pde_nodes_per_half,
                                                        opts.pde_radius_mult);
    return gs.descriptor();
  }
  return "dp N=" + std::to_string(opts.dp.steps) + " q=" + std::to_string(opts.dp.quad_order);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json report_to_json(const CheckReport& report) {
  json items = json::array();
  for (const CheckItem& item : report.items) {
    items.push_back({{"name", item.name},
                     {"value", item.value},
                     {"reference", item.reference},
                     {"tolerance", item.tolerance},
                     {"status", item.pass ? "pass" : "fail"},
                     {"gram_exact", item.gram_exact}});
  }
  return {{"items", items}, {"all_pass", report.all_pass()}};
}

// ---- commands ----

int run_expect(const json& config, const JobContext& ctx, std::ostream& log, Engine dflt) {
  const GParams p = params_from_json(config);
  const phi::TestFunction payoff = phi::parse(config.at("phi").get<std::string>());
  const double t = config.value("t", 1.0);
  Engine engine = dflt;
  if (config.contains("engine")) engine = engine_from_string(config.at("engine").get<std::string>());
  if (ctx.engine_override) engine = *ctx.engine_override;
  GridConfig grid_cfg;
  EngineOptions opts = engine_options_from_json(config, &grid_cfg);

  if (!config.contains("regions") || !config.at("regions").is_array() ||
      config.at("regions").empty())
    throw SchemaError("expect: needs a nonempty 'regions' array");
  std::vector<geo::Region> regions;
  for (const json& rj : config.at("regions")) regions.push_back(region_from_json(rj));

  const geo::GramLaw law = geo::gram_matrix(regions, p);
  const ReducedProblem rp = reduce(law, payoff, t);
  finalize_grid(opts, grid_cfg, rp.rank, p, t);

  const auto t0 = std::chrono::steady_clock::now();
  const SublinearValue v = law_expectation(law, payoff, t, engine, opts);
  const auto t1 = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  json out = {
      {"command", engine == Engine::oracle ? "oracle" : "expect"},
      {"seed", ctx.seed},
      {"results",
       {{{"name", "expectation"},
         {"value_upper", v.upper},
         {"value_lower", v.lower},
         {"engine", engine_name(engine)},
         {"grid_descriptor", grid_descriptor(engine, opts, rp.rank, p, t)}}}},
      {"lambda", law.lambda},
  };
  const auto path = std::filesystem::path(ctx.out_dir) / "result.json";
  write_text(path, out.dump(2) + "\n");
  log << "expect: upper=" << v.upper << " lower=" << v.lower << " engine=" << engine_name(engine)
      << " runtime_ms=" << ms << " -> " << path.string() << "\n";
  return 0;
}

int run_integrate(const json& config, const JobContext& ctx, std::ostream& log) {
  const GParams p = params_from_json(config);
  if (!config.contains("f")) throw SchemaError("integrate: needs 'f'");
  const GridFunction f = grid_function_from_json(config.at("f"));

  const auto t0 = std::chrono::steady_clock::now();
  const auto [lhs, rhs] = integral_isometry(f, p);
  const geo::GramLaw law = spatial_integral_law({f}, p);
  json results = json::array();
  results.push_back({{"name", "isometry_lhs"},
                     {"value_upper", lhs},
                     {"value_lower", lhs},
                     {"engine", "gram"},
                     {"grid_descriptor", "exact"}});
  results.push_back({{"name", "isometry_rhs"},
                     {"value_upper", rhs},
                     {"value_lower", rhs},
                     {"engine", "gram"},
                     {"grid_descriptor", "exact"}});
  if (config.contains("phi")) {
    const phi::TestFunction payoff = phi::parse(config.at("phi").get<std::string>());
    Engine engine = Engine::pde;
    if (config.contains("engine"))
      engine = engine_from_string(config.at("engine").get<std::string>());
    if (ctx.engine_override) engine = *ctx.engine_override;
    EngineOptions opts = engine_options_from_json(config);
    const double t = config.value("t", 1.0);
    const SublinearValue v = law_expectation(law, payoff, t, engine, opts);
    results.push_back({{"name", "integral_expectation"},
                       {"value_upper", v.upper},
                       {"value_lower", v.lower},
                       {"engine", engine_name(engine)},
                       {"grid_descriptor", grid_descriptor(engine, opts, 1, p, t)}});
  }
  const auto t1 = std::chrono::steady_clock::now();

  json out = {{"command", "integrate"},
              {"seed", ctx.seed},
              {"l2_norm_sq", f.l2_norm_sq()},
              {"results", results}};
  const auto path = std::filesystem::path(ctx.out_dir) / "result.json";
  write_text(path, out.dump(2) + "\n");
  log << "integrate: lhs=" << lhs << " rhs=" << rhs << " runtime_ms="
      << std::chrono::duration<double, std::milli>(t1 - t0).count() << " -> " << path.string()
      << "\n";
  return 0;
}

LayeredModel model_from_json(const json& config, const GParams& p) {
  if (!config.contains("times") || !config.contains("cells"))
    throw SchemaError("spacetime commands need 'times' and 'cells'");
  std::vector<geo::Region> cells;
  for (const json& cj : config.at("cells")) cells.push_back(region_from_json(cj));
  return LayeredModel::make(config.at("times").get<std::vector<double>>(), std::move(cells), p);
}

SpaceTimeOptions st_options(const json& config, const JobContext& ctx) {
  SpaceTimeOptions opts;
  if (config.contains("engine"))
    opts.engine = engine_from_string(config.at("engine").get<std::string>());
  if (ctx.engine_override) opts.engine = *ctx.engine_override;
  if (config.contains("dp")) {
    const json& d = config.at("dp");
    if (d.contains("steps")) opts.inner.dp.steps = d.at("steps").get<std::size_t>();
    if (d.contains("quad")) opts.inner.dp.quad_order = d.at("quad").get<std::size_t>();
  }
  return opts;
}

int run_st_expect(const json& config, const JobContext& ctx, std::ostream& log) {
  const GParams p = params_from_json(config);
  const LayeredModel model = model_from_json(config, p);
  const CylinderFunctional x{phi::parse(config.at("phi").get<std::string>())};
  const SpaceTimeOptions opts = st_options(config, ctx);

  const auto t0 = std::chrono::steady_clock::now();
  const SublinearValue v = expectation(model, x, opts);
  const auto t1 = std::chrono::steady_clock::now();

  json out = {{"command", "st-expect"},
              {"seed", ctx.seed},
              {"results",
               {{{"name", "expectation"},
                 {"value_upper", v.upper},
                 {"value_lower", v.lower},
                 {"engine", engine_name(opts.engine)},
                 {"grid_descriptor",
                  "layers=" + std::to_string(model.layers()) +
                      " cells=" + std::to_string(model.cell_count())}}}}};
  const auto path = std::filesystem::path(ctx.out_dir) / "result.json";
  write_text(path, out.dump(2) + "\n");
  log << "st-expect: upper=" << v.upper << " lower=" << v.lower << " runtime_ms="
      << std::chrono::duration<double, std::milli>(t1 - t0).count() << " -> " << path.string()
      << "\n";
  return 0;
}

SimpleAdaptedProcess process_from_json(const LayeredModel& model, const json& j) {
  if (!j.contains("coeff")) throw SchemaError("process needs 'coeff' (layer-major expressions)");
  SimpleAdaptedProcess f;
  for (const json& row : j.at("coeff")) {
    std::vector<phi::TestFunction> coeffs;
    for (const json& e : row) {
      if (e.is_number())
        coeffs.push_back(phi::TestFunction::constant(e.get<double>()));
      else
        coeffs.push_back(phi::parse(e.get<std::string>()));
    }
    f.coeff.push_back(std::move(coeffs));
  }
  if (f.coeff.size() != model.layers())
    throw SchemaError("process: coefficient rows must match the layer count");
  return f;
}

int run_st_integral(const json& config, const JobContext& ctx, std::ostream& log) {
  const GParams p = params_from_json(config);
  const LayeredModel model = model_from_json(config, p);
  if (!config.contains("process")) throw SchemaError("st-integral: needs 'process'");
  const SimpleAdaptedProcess f = process_from_json(model, config.at("process"));
  const SpaceTimeOptions opts = st_options(config, ctx);

  const auto t0 = std::chrono::steady_clock::now();
  const CylinderFunctional integral = ito_integral(model, f);
  const SublinearValue mean = expectation(model, integral, opts);
  const SublinearValue bohner = expectation(model, bohner_integral(model, f), opts);
  const double norm = m2_norm(model, f, opts);
  const CheckReport props = integral_property_suite(model, f, opts);
  const auto t1 = std::chrono::steady_clock::now();

  json out = {{"command", "st-integral"},
              {"seed", ctx.seed},
              {"results",
               {{{"name", "ito_integral_mean"},
                 {"value_upper", mean.upper},
                 {"value_lower", mean.lower},
                 {"engine", engine_name(opts.engine)},
                 {"grid_descriptor", "layers=" + std::to_string(model.layers())}},
                {{"name", "bohner_integral_mean"},
                 {"value_upper", bohner.upper},
                 {"value_lower", bohner.lower},
                 {"engine", engine_name(opts.engine)},
                 {"grid_descriptor", "layers=" + std::to_string(model.layers())}}}},
              {"m2_norm", norm},
              {"properties", report_to_json(props)}};
  const auto path = std::filesystem::path(ctx.out_dir) / "result.json";
  write_text(path, out.dump(2) + "\n");
  log << "st-integral: mean=[" << mean.upper << "," << mean.lower << "] m2=" << norm
      << " props=" << (props.all_pass() ? "pass" : "FAIL") << " runtime_ms="
      << std::chrono::duration<double, std::milli>(t1 - t0).count() << " -> " << path.string()
      << "\n";
  return 0;
}

int run_simulate(const json& config, const JobContext& ctx, std::ostream& log) {
  const GParams p = params_from_json(config);
  const json& s = config.contains("simulate") ? config.at("simulate") : config;
  const double x_max = s.value("x_max", 1.0);
  const double y_max = s.value("y_max", 1.0);
  const std::size_t nx = s.value("nx", std::size_t{16});
  const std::size_t ny = s.value("ny", std::size_t{16});
  const std::size_t paths = s.value("paths", std::size_t{1000});

  SigmaPolicy policy;
  if (s.contains("sigma_sq") && s.at("sigma_sq").is_array()) {
    policy.steps = 1;
    policy.cells = nx * ny;
    policy.sigma_sq = s.at("sigma_sq").get<std::vector<double>>();
    if (policy.sigma_sq.size() != nx * ny)
      throw SchemaError("simulate: per-cell sigma_sq must have nx*ny entries");
  } else {
    policy = SigmaPolicy::constant(s.value("sigma_sq", p.sigma_hi_sq), 1, nx * ny);
  }
  policy.validate(p);

  const auto t0 = std::chrono::steady_clock::now();
  const LatticeEnsemble e = sample_paths(x_max, y_max, nx, ny, policy, paths, ctx.seed);
  const auto t1 = std::chrono::steady_clock::now();

  std::string csv = "x1,x2,value,path_id\n";
  csv.reserve(e.corners.size() * 24);
  char buf[128];
  for (std::size_t path = 0; path < e.paths; ++path)
    for (std::size_t i = 0; i <= nx; ++i)
      for (std::size_t j = 0; j <= ny; ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%zu\n", e.x_at(i), e.y_at(j),
                      e.corner(path, i, j), path);
        csv += buf;
      }
  const auto path = std::filesystem::path(ctx.out_dir) / "paths.csv";
  write_text(path, csv);
  log << "simulate: paths=" << paths << " lattice=" << nx << "x" << ny << " runtime_ms="
      << std::chrono::duration<double, std::milli>(t1 - t0).count() << " -> " << path.string()
      << "\n";
  return 0;
}

// default geometry for suite checks: two abutting unit segments plus a
// third that overlaps both
std::vector<geo::Region> default_regions() {
  auto seg = [](double a, double b) {
    geo::Box box;
    box.lo = {a};
    box.hi = {b};
    return geo::Region::box(box);
  };
  return {seg(0.0, 1.0), seg(1.0, 2.0), seg(0.5, 1.5)};
}

json run_one_suite(const std::string& suite, const json& config, const JobContext& ctx,
                   bool* all_pass) {
  const GParams p = config.contains("params") ? params_from_json(config) : GParams{1.0, 4.0};

  if (suite == "whitenoise-axioms") {
    Engine engine = Engine::pde;
    if (config.contains("engine"))
      engine = engine_from_string(config.at("engine").get<std::string>());
    if (ctx.engine_override) engine = *ctx.engine_override;
    const CheckReport rep = whitenoise_axiom_suite(default_regions(), p, engine);
    *all_pass = *all_pass && rep.all_pass();
    return report_to_json(rep);
  }

  if (suite == "sublinear-axioms") {
    const geo::GramLaw law = geo::gram_from_matrix({1.0}, 1, p);
    const ExpectationFn eval = [&](const phi::TestFunction& f) {
      return law_expectation(law, f, 1.0, Engine::pde).upper;
    };
    std::vector<std::pair<phi::TestFunction, phi::TestFunction>> probes;
    probes.emplace_back(phi::parse("x1"), phi::parse("x1^2"));
    probes.emplace_back(phi::parse("max(x1,0)"), phi::parse("abs(x1)"));
    probes.emplace_back(phi::parse("min(x1^2,4)"), phi::parse("x1^2-1"));
    const AxiomReport rep = check_sublinear_axioms(eval, probes, 1e-2);
    json items = json::array();
    bool pass = rep.all_pass();
    for (const AxiomCheck& c : rep.checks)
      items.push_back({{"name", c.axiom},
                       {"value", c.worst_violation},
                       {"status", c.pass ? "pass" : "fail"}});
    *all_pass = *all_pass && pass;
    return {{"items", items}, {"all_pass", pass}};
  }

  if (suite == "consistency") {
    const std::size_t count = config.value("instances", std::size_t{1000});
    RngStream rng(ctx.seed);
    std::size_t failures = 0;
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t n = 2 + rng.next_u64() % 3;
      std::vector<geo::Region> regions;
      for (std::size_t i = 0; i < n; ++i) {
        geo::Box b;
        const double lo = std::floor(rng.uniform() * 8.0) * 0.25;
        const double len = 0.25 + std::floor(rng.uniform() * 6.0) * 0.25;
        b.lo = {lo};
        b.hi = {lo + len};
        regions.push_back(geo::Region::box(b));
      }
      std::vector<double> q(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          const double v = 2.0 * rng.uniform() - 1.0;
          q[i * n + j] = v;
          q[j * n + i] = v;
        }
      geo::Box eb;
      eb.lo = {rng.uniform()};
      eb.hi = {eb.lo[0] + 1.0};
      if (!check_compatibility(regions, geo::Region::box(eb), q, p)) ++failures;
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.next_u64() % i]);
      if (!check_symmetry(regions, perm, q, p)) ++failures;
    }
    const bool pass = failures == 0;
    *all_pass = *all_pass && pass;
    return {{"instances", count}, {"failures", failures}, {"all_pass", pass}};
  }

  if (suite == "integral-properties") {
    geo::Box b1, b2;
    b1.lo = {0.0};
    b1.hi = {1.0};
    b2.lo = {1.5};
    b2.hi = {3.0};
    const LayeredModel model = LayeredModel::make(
        {0.0, 0.5, 1.0, 1.5}, {geo::Region::box(b1), geo::Region::box(b2)}, p);
    SimpleAdaptedProcess f = SimpleAdaptedProcess::constant(model, 1.0);
    f.coeff[1][0] = phi::parse("x1");
    f.coeff[2][1] = phi::parse("x2");
    const CheckReport rep = integral_property_suite(model, f);
    *all_pass = *all_pass && rep.all_pass();
    return report_to_json(rep);
  }

  if (suite == "conditional-axioms") {
    const std::size_t draws = config.value("draws", std::size_t{100});
    const CheckReport rep = conditional_axiom_suite(draws, ctx.seed, p);
    *all_pass = *all_pass && rep.all_pass();
    return report_to_json(rep);
  }

  throw SchemaError("unknown check suite '" + suite + "'");
}

int run_check(const json& config, const JobContext& ctx, std::ostream& log) {
  std::vector<std::string> suites;
  const std::string requested =
      config.contains("check") && config.at("check").contains("suite")
          ? config.at("check").at("suite").get<std::string>()
          : "all";
  if (requested == "all") {
    suites = {"whitenoise-axioms", "sublinear-axioms", "consistency", "integral-properties",
              "conditional-axioms"};
  } else {
    suites = {requested};
  }
  const json& sub = config.contains("check") ? config.at("check") : config;

  bool all_pass = true;
  json out = {{"command", "check"}, {"seed", ctx.seed}, {"suites", json::object()}};
  for (const std::string& suite : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    out["suites"][suite] = run_one_suite(suite, sub, ctx, &all_pass);
    const auto t1 = std::chrono::steady_clock::now();
    log << "check " << suite << ": "
        << (out["suites"][suite].value("all_pass", false) ? "pass" : "FAIL") << " runtime_ms="
        << std::chrono::duration<double, std::milli>(t1 - t0).count() << "\n";
  }
  out["all_pass"] = all_pass;
  const auto path = std::filesystem::path(ctx.out_dir) / "check.json";
  write_text(path, out.dump(2) + "\n");
  log << "check: " << (all_pass ? "all suites pass" : "FAILURES reported") << " -> "
      << path.string() << "\n";
  return 0;  // failed checks are data, not an engine error
}

} // namespace

geo::Region region_from_json(const json& j) {
  if (j.contains("box")) return geo::Region::box(box_from_json(j.at("box")));
  if (j.contains("polygon")) {
    geo::Polygon poly;
    for (const json& pt : j.at("polygon"))
      poly.pts.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
    return geo::Region::polygon(std::move(poly));
  }
  if (j.contains("union")) {
    geo::Region out;
    bool first = true;
    for (const json& part : j.at("union")) {
      const geo::Region r = region_from_json(part);
      out = first ? r : geo::Region::unite(out, r);
      first = false;
    }
    if (first) throw SchemaError("region union must not be empty");
    return out;
  }
  throw SchemaError("region must be one of {box, polygon, union}");
}

GridFunction grid_function_from_json(const json& j) {
  if (j.contains("indicator")) return GridFunction::indicator(region_from_json(j.at("indicator")));
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    return GridFunction::on_grid(box_from_json(g.at("support")),
                                 g.at("shape").get<std::vector<std::size_t>>(),
                                 g.at("values").get<std::vector<double>>());
  }
  throw SchemaError("f must be one of {indicator, grid}");
}

int run(const std::string& command, const json& config, const JobContext& ctx,
        std::ostream& log) {
  try {
    std::filesystem::create_directories(ctx.out_dir);
    if (command == "expect") return run_expect(config, ctx, log, Engine::pde);
    if (command == "oracle") return run_expect(config, ctx, log, Engine::oracle);
    if (command == "integrate") return run_integrate(config, ctx, log);
    if (command == "st-expect") return run_st_expect(config, ctx, log);
    if (command == "st-integral") return run_st_integral(config, ctx, log);
    if (command == "simulate") return run_simulate(config, ctx, log);
    if (command == "check") return run_check(config, ctx, log);
    log << "error: unknown command '" << command << "'\n";
    return 2;
  } catch (const SchemaError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const phi::ParseError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "engine error: " << e.what() << "\n";
    return 3;
  }
}

} // namespace gfield::jobs
