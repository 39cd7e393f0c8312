#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gfield/jobs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gfield - sublinear expectations of white-noise functionals"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::string engine;
  bool check_all = false;

  const std::vector<std::string> commands = {"expect",      "oracle",   "integrate", "st-expect",
                                             "st-integral", "simulate", "check"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "job config (JSON)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--engine", engine, "pde|oracle override");
    if (name == "check") sub->add_flag("--all", check_all, "run every property suite");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  nlohmann::json config = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config error: cannot open " << config_path << "\n";
      return 2;
    }
    try {
      in >> config;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
  } else if (command != "check" && command != "simulate") {
    std::cerr << "config error: --config is required for " << command << "\n";
    return 2;
  }
  if (check_all) config["check"] = {{"suite", "all"}};

  gfield::jobs::JobContext ctx;
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  if (!engine.empty()) {
    if (engine == "pde")
      ctx.engine_override = gfield::Engine::pde;
    else if (engine == "oracle")
      ctx.engine_override = gfield::Engine::oracle;
    else {
      std::cerr << "config error: unknown engine '" << engine << "'\n";
      return 2;
    }
  }
  return gfield::jobs::run(command, config, ctx, std::cout);
}
