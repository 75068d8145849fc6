// darkcav command-line front end.
//
//   darkcav simulate  lattice propagation, writes a trajectory
//   darkcav grid      split-step position-space propagation, writes a field
//   darkcav dark      dark-amplitude table
//   darkcav figure    figure dataset (--id 1a ... 4)
//   darkcav sweep     parameter sweep summary
//
// Precedence: built-in defaults < --config file < command-line flags.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "darkcav/darkcav.hpp"

namespace {

using namespace darkcav;

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct Overrides {
  std::vector<std::pair<std::string, std::string>> values;

  void option(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values.emplace_back(key, v); }, help);
  }
  void flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& value,
            const std::string& help) {
    app->add_flag_callback(flag, [this, key, value] { values.emplace_back(key, value); }, help);
  }
};

struct Common {
  std::string config_path;
  std::string save_config;
  Overrides overrides;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "flat key = value configuration file");
  app->add_option("--save-config", c.save_config, "write the effective configuration to this path");
  auto& o = c.overrides;
  o.option(app, "--omega", "omega", "coupling Omega (units of w_rec)");
  o.option(app, "--kappa", "kappa", "cavity loss kappa'");
  o.option(app, "--delta", "delta", "detuning Delta'");
  o.option(app, "--q1", "q1", "quasi-momentum of atom 1");
  o.option(app, "--q2", "q2", "quasi-momentum of atom 2");
  o.option(app, "--phi", "phi", "mode phase");
  o.flag(app, "--rna", "rna", "true", "Raman-Nath approximation");
  o.flag(app, "--full", "rna", "false", "full model (default)");
  o.option(app, "--mmax", "mmax", "lattice half-width");
  o.option(app, "--tmax", "tau_end", "final time tau");
  o.option(app, "--samples", "samples", "number of output samples");
  o.option(app, "--tol", "tol", "integrator tolerance");
  o.option(app, "--initial", "initial", "delta | excited | dark | D1 | D2 | trap");
  o.option(app, "--dark-m", "dark_m", "m of |d_mn>");
  o.option(app, "--dark-n", "dark_n", "n of |d_mn>");
  o.option(app, "--out", "out", "output path (default: stdout for text formats)");
  o.option(app, "--format", "format", "csv | json | bin");
  o.option(app, "--workers", "workers", "worker threads (capped by DARKCAV_MAX_WORKERS)");
}

RunConfig resolve(const Common& c, Mode mode) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  for (const auto& [k, v] : c.overrides.values) set_config_value(cfg, k, v);
  if (mode == Mode::TwoAtom && cfg.mode == Mode::OneAtom) mode = Mode::OneAtom;
  cfg.mode = mode;
  if (!c.save_config.empty()) {
    try {
      detail::write_text(c.save_config, to_text(cfg));
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
  }
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) std::cout << text;
  else detail::write_text(cfg.out, text);
}

void require_out_for_bin(const RunConfig& cfg) {
  if (cfg.format == Format::Bin && cfg.out.empty())
    throw Error(ErrorCode::ConfigError, "--format bin needs --out");
}

int cmd_simulate(const RunConfig& cfg) {
  require_out_for_bin(cfg);
  const PropagateOptions opts{.tol = cfg.tol};
  auto write = [&](const auto& tr) {
    if (cfg.out.empty())
      emit(cfg, cfg.format == Format::Json ? trajectory_json(tr).dump(1) + "\n" : trajectory_csv(tr));
    else
      export_trajectory(tr, cfg.out, cfg.format);
    std::fprintf(stderr, "final survival %.12g, max boundary population %.3g%s\n",
                 survival_probability(tr.states.back()), tr.stats.max_boundary_population,
                 tr.stats.truncation_warning ? " (truncation warning: raise --mmax)" : "");
  };
  if (cfg.mode == Mode::OneAtom) {
    if (cfg.initial != "excited" && cfg.initial != "delta")
      throw Error(ErrorCode::ConfigError, "one-atom runs start from the excited state");
    write(propagate(one_atom_excited_state(cfg.mmax), cfg.params, cfg.flag, cfg.tau_end, cfg.samples, opts));
  } else {
    write(propagate(make_two_atom_initial(cfg), cfg.params, cfg.flag, cfg.tau_end, cfg.samples, opts));
  }
  return 0;
}

PositionField grid_initial(const RunConfig& cfg) {
  const auto& s = cfg.initial;
  if (s == "trap") {
    if (cfg.boundary != Boundary::Dirichlet)
      throw Error(ErrorCode::ConfigError, "initial = trap needs boundary = dirichlet");
    return exact_dark_state_trap(cfg.trap_n, 0.0).field(cfg.grid);
  }
  if (cfg.boundary != Boundary::Periodic)
    throw Error(ErrorCode::ConfigError, "initial = " + s + " needs boundary = periodic");
  if (s == "D1" || s == "D2") return exact_dark_states_periodic(cfg.params)[s == "D1" ? 0 : 1].field(cfg.grid);
  return lattice_to_field(make_two_atom_initial(cfg), cfg.grid, cfg.params.phi);
}

int cmd_grid(const RunConfig& cfg) {
  require_out_for_bin(cfg);
  if (cfg.format == Format::Json) throw Error(ErrorCode::ConfigError, "field output supports bin and csv");
  const auto init = grid_initial(cfg);
  PositionField out = init;
  if (cfg.flag.rna) {
    out = grid_evolve_rna(init, cfg.params, cfg.tau_end);
  } else {
    if (!(cfg.dtau > 0.0)) throw Error(ErrorCode::ConfigError, "dtau must be > 0");
    const auto steps = static_cast<std::size_t>(std::llround(cfg.tau_end / cfg.dtau));
    out = grid_evolve(init, cfg.params, cfg.dtau, steps);
  }
  if (cfg.out.empty()) emit(cfg, field_csv(out));
  else export_field(out, cfg.out, cfg.format);
  std::fprintf(stderr, "tau %.12g, norm %.12g, darkness residual %.3g\n", out.time(), out.norm2(),
               darkness_residual(out));
  return 0;
}

int cmd_dark(const RunConfig& cfg) {
  if (cfg.format == Format::Bin) throw Error(ErrorCode::ConfigError, "dark table output supports csv and json");
  const auto table = dark_amplitudes(cfg.mmax);
  if (cfg.out.empty())
    emit(cfg, cfg.format == Format::Json ? dark_table_json(table).dump(1) + "\n" : dark_table_csv(table));
  else
    export_dark_table(table, cfg.out, cfg.format);
  std::fprintf(stderr, "c1[0,0] = %.15g, c2[1,1] = %.15g, c1[2,0] = %.15g\n", table(1, 0, 0).real(),
               table(2, 1, 1).real(), table(1, 2, 0).real());
  std::fprintf(stderr, "rel1 residual %.3g, rel2 residual %.3g\n", table.rel1_residual(), table.rel2_residual());
  std::fprintf(stderr, "population |m|+|n|<=2: %.9g, <=4: %.9g\n", table.population_within(2),
               table.population_within(4));
  if (cfg.quadrature > 0) {
    double worst = 0.0;
    const int r = std::min(cfg.mmax, 6);
    for (int ch = 1; ch <= 2; ++ch)
      for (int m = -r; m <= r; ++m)
        for (int n = -r; n <= r; ++n)
          worst = std::max(worst, std::abs(quadrature_c(ch, m, n, cfg.quadrature) - table(ch, m, n)));
    std::fprintf(stderr, "quadrature (G=%zu) max deviation over |m|,|n|<=%d: %.3g\n", cfg.quadrature, r, worst);
  }
  return 0;
}

int cmd_figure(const RunConfig& cfg) {
  if (cfg.format != Format::Csv) throw Error(ErrorCode::ConfigError, "figure datasets are csv");
  if (cfg.figure.empty()) throw Error(ErrorCode::ConfigError, "figure needs --id");
  const auto ds = run_figure(cfg.figure);
  emit(cfg, ds.csv());
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  if (cfg.format != Format::Csv) throw Error(ErrorCode::ConfigError, "sweep summaries are csv");
  const auto res = run_sweep(cfg);
  emit(cfg, res.csv());
  std::size_t failed = 0;
  for (const auto& r : res.rows) failed += r.ok ? 0 : 1;
  std::fprintf(stderr, "%zu rows, %zu failed, %u workers\n", res.rows.size(), failed, res.workers);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two atoms in a damped cavity: lattice, grid and dark-state tools"};
  app.set_version_flag("--version", std::string(software_version));
  app.require_subcommand(1, 1);

  Common common;
  std::string atoms;

  auto* simulate = app.add_subcommand("simulate", "lattice propagation; writes a trajectory");
  add_common(simulate, common);
  simulate->add_option_function<int>(
      "--atoms",
      [&](int a) {
        if (a != 1 && a != 2) throw CLI::ValidationError("--atoms", "must be 1 or 2");
        common.overrides.values.emplace_back("mode", a == 1 ? "one-atom" : "two-atom");
      },
      "1 or 2");

  auto* grid = app.add_subcommand("grid", "split-step propagation on a position grid; writes a field");
  add_common(grid, common);
  common.overrides.option(grid, "--grid", "grid", "points per axis");
  common.overrides.option(grid, "--boundary", "boundary", "periodic | dirichlet");
  common.overrides.option(grid, "--trap-n", "trap_n", "trap wavenumber N (k = N pi / L)");
  common.overrides.option(grid, "--dtau", "dtau", "time step");

  auto* dark = app.add_subcommand("dark", "dark-amplitude table");
  add_common(dark, common);
  common.overrides.option(dark, "--quadrature", "quadrature", "cross-check against quadrature on this grid");

  auto* figure = app.add_subcommand("figure", "figure dataset");
  add_common(figure, common);
  common.overrides.option(figure, "--id", "figure", "1a 1b 1c 1d 2a 2b 2c 2d 3a 3b 4");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  add_common(sweep, common);
  common.overrides.option(sweep, "--sweep-omega", "sweep_omega", "comma-separated Omega values");
  common.overrides.option(sweep, "--sweep-kappa", "sweep_kappa", "comma-separated kappa' values");
  common.overrides.option(sweep, "--sweep-delta", "sweep_delta", "comma-separated Delta' values");
  common.overrides.option(sweep, "--fit-t0", "fit_t0", "fit window start");
  common.overrides.option(sweep, "--fit-t1", "fit_t1", "fit window end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(resolve(common, Mode::TwoAtom));
    if (grid->parsed()) return cmd_grid(resolve(common, Mode::Grid));
    if (dark->parsed()) return cmd_dark(resolve(common, Mode::DarkAnalyze));
    if (figure->parsed()) return cmd_figure(resolve(common, Mode::Figure));
    if (sweep->parsed()) return cmd_sweep(resolve(common, Mode::Sweep));
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.is_numerical() ? exit_numerical : exit_config;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_numerical;
  }
  return exit_config;
}
