#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "darkcav/config.hpp"
#include "darkcav/figures.hpp"

namespace darkcav {

/// Environment variable capping sweep worker threads.
inline constexpr const char* max_workers_env = "DARKCAV_MAX_WORKERS";

struct SweepRow {
  std::size_t index = 0;
  Params params;
  std::string state;
  bool ok = false;
  std::string error;
  std::optional<Plateau> plateau;
  double rate = 0.0;
  double final_survival = 0.0;
  double max_boundary_population = 0.0;
  bool truncation_warning = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  unsigned workers = 1;

  std::string csv() const {
    std::ostringstream o;
    o << "index,omega,kappa,delta,state,status,plateau,plateau_onset,rate,final_survival,"
         "max_boundary_population,boundary_flag,error\n";
    for (const auto& r : rows) {
      o << r.index << ',' << format_double(r.params.omega) << ',' << format_double(r.params.kappa) << ','
        << format_double(r.params.delta) << ',' << r.state << ',' << (r.ok ? "ok" : "failed") << ',';
      if (r.ok) {
        if (r.plateau) o << format_double(r.plateau->value) << ',' << format_double(r.plateau->onset);
        else o << ',';
        o << ',' << format_double(r.rate) << ',' << format_double(r.final_survival) << ','
          << format_double(r.max_boundary_population) << ',' << (r.truncation_warning ? 1 : 0) << ',';
      } else {
        std::string msg = r.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        o << ",,,,,," << msg;
      }
      o << '\n';
    }
    return o.str();
  }
};

/// Worker count: requested, capped by the environment variable and the row count.
inline unsigned effective_workers(unsigned requested, std::size_t rows) {
  unsigned w = std::max(1u, requested);
  if (const char* env = std::getenv(max_workers_env)) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) w = std::min(w, static_cast<unsigned>(cap));
  }
  if (rows > 0) w = std::min<std::size_t>(w, rows);
  return w;
}

/// Cartesian product omega x kappa x delta (omega outermost). An empty axis
/// takes the scalar value from cfg.params; all three empty is EmptyGrid.
inline std::vector<Params> sweep_grid(const RunConfig& cfg) {
  if (cfg.sweep_omega.empty() && cfg.sweep_kappa.empty() && cfg.sweep_delta.empty())
    throw Error(ErrorCode::EmptyGrid, "sweep needs at least one of sweep_omega, sweep_kappa, sweep_delta");
  auto axis = [](const std::vector<double>& v, double fallback) {
    return v.empty() ? std::vector<double>{fallback} : v;
  };
  std::vector<Params> out;
  for (double o : axis(cfg.sweep_omega, cfg.params.omega))
    for (double k : axis(cfg.sweep_kappa, cfg.params.kappa))
      for (double d : axis(cfg.sweep_delta, cfg.params.delta)) {
        Params p = cfg.params;
        p.omega = o;
        p.kappa = k;
        p.delta = d;
        out.push_back(p);
      }
  return out;
}

/// Runs decay_run for every grid point. Rows come back in grid order; a
/// failing row records its error and the others still run.
inline SweepResult run_sweep(const RunConfig& cfg) {
  const auto grid = sweep_grid(cfg);
  SweepResult result;
  result.rows.resize(grid.size());
  result.workers = effective_workers(cfg.workers, grid.size());

  auto run_row = [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    row.index = i;
    row.params = grid[i];
    row.state = state_label(cfg);
    try {
      RunConfig c = cfg;
      c.params = grid[i];
      const auto r = decay_run(c);
      row.plateau = r.plateau;
      row.rate = r.rate;
      row.final_survival = r.survival.back();
      row.max_boundary_population = r.trajectory.stats.max_boundary_population;
      row.truncation_warning = r.trajectory.stats.truncation_warning;
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) run_row(i);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < result.workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

}  // namespace darkcav
