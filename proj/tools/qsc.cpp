// qsc: derivations, variance curves, PDE surfaces, Fock oracle, cross-checks.

#include "qsc/app/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::optional<double> alpha;
  std::optional<double> t_max;
  std::optional<double> dt;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance_scale;
};

// --dt goes to the step of whichever route the command integrates.
void apply_dt(qsc::app::RunConfig& cfg, double dt) {
  if (cfg.command == "pde") {
    cfg.pde_dt = dt;
  } else if (cfg.command == "oracle") {
    cfg.oracle_dt = dt;
  } else {
    cfg.solver_dt = dt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum stochastic calculus for the double-pass atom-field system"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--alpha", flags.alpha, "coupling strength");
    sub->add_option("--t-max", flags.t_max, "final time");
    sub->add_option("--dt", flags.dt, "time step of the route this command runs");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--config", flags.config, "section.key = value file");
    sub->add_option("--seed", flags.seed, "Monte Carlo seed");
    sub->add_option("--tolerance-scale", flags.tolerance_scale, "multiplier on numeric tolerances");
  };
  const std::pair<const char*, const char*> commands[] = {
      {"derive", "print the symbolic derivations"},
      {"variances", "closed-form and ODE variance curves"},
      {"pde", "characteristic-function surfaces"},
      {"oracle", "truncated-Fock collision-model oracle"},
      {"compare", "cross-check every route"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qsc::app::kConfigFailure;
  }

  qsc::app::RunConfig cfg;
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (flags.config) qsc::app::apply_config_file(cfg, *flags.config);
    if (flags.alpha) cfg.alpha = *flags.alpha;
    if (flags.t_max) cfg.t_max = *flags.t_max;
    if (flags.dt) apply_dt(cfg, *flags.dt);
    if (flags.out) cfg.out = *flags.out;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.tolerance_scale) cfg.tol.scale = *flags.tolerance_scale;
  } catch (const qsc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qsc::app::kConfigFailure;
  }
  return qsc::app::run_guarded(cfg, std::cout, std::cerr);
}
