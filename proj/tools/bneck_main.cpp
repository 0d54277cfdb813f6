#include <iostream>

#include <CLI11.hpp>

#include "bneck/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous bottleneck equilibrium and day-to-day dynamics"};
  app.require_subcommand(1, 1);
  bneck::RunConfig cfg;

  for (const char* name : {"solve", "verify", "perturb", "simulate", "export", "division-line"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--instance", cfg.instance_path, "instance JSON (default: linear example)");
    sub->add_option("--out", cfg.output_dir, "output directory");
    sub->add_option("--tol", cfg.tol, "solver tolerance (time units)");
    sub->add_option("--grid", cfg.grid, "grid resolution");
    sub->add_option("--days", cfg.days, "days to simulate");
    sub->add_option("--epsilon", cfg.epsilon, "bump height");
    sub->add_option("--t1", cfg.t1, "bump start");
    sub->add_option("--t2", cfg.t2, "bump end");
    sub->add_option("--knots", cfg.knots, "bump knot count");
    sub->add_option("--a", cfg.a, "OLP step scale");
    sub->add_option("--b", cfg.b, "OLP floor fraction");
    sub->add_option("--alpha", cfg.alpha, "OLP smoothing");
    sub->add_option("--snapshot-every", cfg.snapshot_every, "profile snapshot period in days");
    sub->add_option("--seed", cfg.seed, "seed for randomized sweeps");
    sub->add_flag("--no-timestamp", cfg.no_timestamp, "omit timestamps (always the case)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bneck::ExitCode::validation_failure;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return bneck::run(cfg, std::cout, std::cerr);
}
