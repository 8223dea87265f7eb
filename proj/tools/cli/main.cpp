#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using symcone::cli::RunConfig;
  RunConfig cfg;
  CLI::App app{"symcone: experiments on weighted Bergman spaces of symmetric-cone tube domains"};
  app.set_config("--config", "", "Flat key=value file (keys are the long flag names); flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1, 1);

  app.add_option("--cone", cfg.cone, "rank1, lorentzN or symM")->capture_default_str();
  app.add_option("--delta", cfg.delta, "lattice parameter δ")->capture_default_str();
  app.add_option("--deltas", cfg.deltas, "comma list of δ for sweeps (overrides --delta)");
  app.add_option("--radius", cfg.radius, "d_Ω-radius D of the truncated cone region")->capture_default_str();
  app.add_option("--xbox", cfg.xbox, "half-width of the x-box")->capture_default_str();
  app.add_option("--r-policy", cfg.r_policy, "fixed or estimate")->capture_default_str();
  app.add_option("--R", cfg.R, "ball ratio R for the fixed policy")->capture_default_str();
  app.add_option("--r-samples", cfg.r_samples, "pairs sampled by the estimate policy")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for every randomized choice")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte-Carlo samples for lattice verification")->capture_default_str();
  app.add_option("--omega-radius", cfg.omega_radius, "cone-side quadrature radius")->capture_default_str();
  app.add_option("--x-half-width", cfg.x_half_width, "x-side quadrature half-width")->capture_default_str();
  app.add_option("--resolution", cfg.resolution, "quadrature cells per axis")->capture_default_str();
  app.add_option("--order", cfg.order, "Gauss-Legendre nodes per cell")->capture_default_str();
  app.add_option("--refine-depth", cfg.refine_depth, "domain doublings for truncation estimates")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "quadrature tolerance")->capture_default_str();
  app.add_option("--domain", cfg.domain, "full or region")->capture_default_str();
  app.add_option("--p", cfg.p, "x-exponent (rational or inf)")->capture_default_str();
  app.add_option("--q", cfg.q, "y-exponent (rational)")->capture_default_str();
  app.add_option("--s", cfg.s, "weight s as v1,v2,... (one value broadcasts; default n/r + 1)");
  app.add_option("--t", cfg.t, "kernel exponent t for the positive-operator window");
  app.add_option("--y", cfg.y, "cone point coefficients for laplace (default e)");
  app.add_option("--family", cfg.family, "atom family size for sampling")->capture_default_str();
  app.add_option("--spread", cfg.spread, "center spread of the atom family")->capture_default_str();
  app.add_option("--mode", cfg.mode, "neumann or lsq")->capture_default_str();
  app.add_option("--target", cfg.target, "manufactured, offlattice or zero")->capture_default_str();
  app.add_option("--weight", cfg.weight, "statement or pairing atom weights")->capture_default_str();
  app.add_option("--iters", cfg.iters, "Neumann iterations")->capture_default_str();
  app.add_option("--validation", cfg.validation, "validation points")->capture_default_str();
  app.add_option("--interior", cfg.interior, "fraction of the region holding targets and validation points")
      ->capture_default_str();
  app.add_option("--theta", cfg.theta, "interpolation parameter θ");
  app.add_option("--phi", cfg.phi, "reiteration parameter φ");
  app.add_option("--p0", cfg.p0, "endpoint exponent p0");
  app.add_option("--q0", cfg.q0, "endpoint exponent q0");
  app.add_option("--p1", cfg.p1, "endpoint exponent p1");
  app.add_option("--q1", cfg.q1, "endpoint exponent q1");
  app.add_option("--out", cfg.out, "output path (stdout when empty; {delta} expands in sweeps)");

  auto* lattice = app.add_subcommand("lattice", "build, verify and serialize a tube lattice");
  lattice->add_option("--verify", cfg.verify, "verify an existing lattice file instead of building one");
  app.add_subcommand("laplace", "Laplace transform of a generalized power: closed form vs quadrature");
  app.add_subcommand("sampling", "sampling-ratio band of a random atom family (CSV)");
  app.add_subcommand("reconstruct", "atomic reconstruction residuals (CSV)");
  app.add_subcommand("params", "exact parameter windows and interpolation arithmetic (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return symcone::cli::exit_invalid;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return symcone::cli::run(cfg, std::cerr);
}
