#include <iostream>

#include "CLI11.hpp"
#include "run.hpp"

int main(int argc, char** argv) {
  using sphspec::cli::RunConfig;
  RunConfig cfg;
  CLI::App app{"Spectral toolkit for the perturbed spherical Schroedinger operator on (0, 1]"};
  app.require_subcommand(1);

  for (const auto& name : sphspec::cli::kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--l", cfg.l, "angular momentum l >= -1/2 (decimal)");
    sub->add_option("--potential", cfg.potential, "potential JSON file (default q = 0)");
    sub->add_option("--bc", cfg.bc, "dirichlet | robin:BETA");
    sub->add_option("--alpha", cfg.alpha, "first boundary parameter for two spectra (inf = Dirichlet)");
    sub->add_option("--beta", cfg.beta, "boundary parameter (inf = Dirichlet)");
    sub->add_option("--n-max", cfg.n_max, "number of eigenvalues");
    sub->add_option("--tol", cfg.tol, "relative tolerance on sqrt(lambda)");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv | json");
    sub->add_option("--mesh", cfg.mesh, "finite-difference interior points M");
    sub->add_option("--delta", cfg.delta, "finite-difference left truncation");
    if (name == "export-data") {
      sub->add_option("--kind", cfg.kind, "two-spectra | norming | boundary");
      sub->add_option("--which", cfg.which, "value | derivative");
    }
    if (name == "mfun") {
      sub->add_option("--z-from", cfg.z_from, "first z");
      sub->add_option("--z-to", cfg.z_to, "last z");
      sub->add_option("--points", cfg.points, "number of z samples");
    }
    if (name == "verify-bounds") sub->add_option("--bound", cfg.bound, "bound id or all");
    sub->callback([&cfg, name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sphspec::cli::malformed_config;
  }
  return sphspec::cli::run(cfg, std::cerr);
}
