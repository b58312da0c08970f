#include <iostream>

#include <CLI11.hpp>

#include "vortex/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Thin vortex ring: LIE dynamics, impulse, Dirichlet spectra and circulation levels"};
  app.require_subcommand(1);

  vortex::CliOptions opt;
  int n_min = 0, n_max = 0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opt.config_path, "JSON run configuration");
    if (config_required) c->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides output.directory)");
    sub->add_flag("--force-grid", opt.force_grid, "use the grid solver even when a closed form exists");
    sub->add_option("--grid-h", opt.grid_h, "grid cell size in units of R0")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", opt.quiet, "no summary on stdout");
  };

  auto* disp = app.add_subcommand("dispersion", "table of w_n = n sqrt(n^2 - 1)");
  add_common(disp, false);
  auto* o1 = disp->add_option("--n-min", n_min, "first n (default 1)");
  auto* o2 = disp->add_option("--n-max", n_max, "last n (default 5)");

  add_common(app.add_subcommand("simulate", "nonlinear or linearized filament run"), true);
  add_common(app.add_subcommand("eigen", "Dirichlet eigenvalues of the cross-section"), true);
  add_common(app.add_subcommand("spectrum", "circulation levels and peak histogram"), true);
  add_common(app.add_subcommand("validate", "check a configuration without running it"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vortex::kExitValidation;
  }
  if (o1->count()) opt.n_min = n_min;
  if (o2->count()) opt.n_max = n_max;

  const std::string name = app.get_subcommands().front()->get_name();
  return vortex::run_command(name, opt, std::cout, std::cerr);
}
