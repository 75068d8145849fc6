#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "darkcav/config.hpp"
#include "darkcav/dark.hpp"
#include "darkcav/fit.hpp"
#include "darkcav/io.hpp"
#include "darkcav/observables.hpp"
#include "darkcav/propagate.hpp"

#ifndef DARKCAV_VERSION
#define DARKCAV_VERSION "0.1.0"
#endif

namespace darkcav {

inline constexpr std::string_view software_version = DARKCAV_VERSION;

/// Two-atom initial state named by `cfg.initial` on a window of `cfg.mmax`:
/// delta, dark (|d_mn> with cfg.dark_m, cfg.dark_n), D1, D2.
inline TwoAtomState make_two_atom_initial(const RunConfig& cfg) {
  const auto& s = cfg.initial;
  if (s == "delta") return delta_initial_state(cfg.mmax);
  if (s == "dark") return dark_basis_state(cfg.dark_m, cfg.dark_n, cfg.mmax).state(cfg.mmax);
  if (s == "D1" || s == "D2") {
    auto d = exact_dark_states_periodic(cfg.params, 2)[s == "D1" ? 0 : 1].lattice;
    require_window(cfg.mmax);
    TwoAtomState out(cfg.mmax);
    for_each_index(d, [&](const LatticeIndex& i) { out(i.channel, i.m, i.n) = d(i.channel, i.m, i.n); });
    return out;
  }
  throw Error(ErrorCode::ConfigError, "initial state '" + s + "' is not a two-atom lattice state");
}

inline std::string state_label(const RunConfig& cfg) {
  if (cfg.initial == "dark") return "d" + std::to_string(cfg.dark_m) + "_" + std::to_string(cfg.dark_n);
  return cfg.initial;
}

/// Survival curve of a two-atom run with the plateau and the fitted decay rate
/// of ln P over [fit_t0, fit_t1]. Shared by figure 4 and the sweep.
struct DecayRun {
  Trajectory<TwoAtomState> trajectory;
  std::vector<double> survival;
  std::optional<Plateau> plateau;
  double rate = 0.0;
};

inline DecayRun decay_run(const RunConfig& cfg) {
  DecayRun r;
  r.trajectory = propagate(make_two_atom_initial(cfg), cfg.params, cfg.flag, cfg.tau_end, cfg.samples,
                           {.tol = cfg.tol});
  r.survival = r.trajectory.survival();
  r.plateau = detect_plateau(r.trajectory.times, r.survival);
  r.rate = fit_decay_rate(r.trajectory.times, r.survival, cfg.fit_t0, cfg.fit_t1);
  return r;
}

// ---------------------------------------------------------------------------

struct FigureRow {
  std::string series;
  double tau = 0.0;
  int index = 0;
  double value = 0.0;
};

/// Long-format table (series, tau, index, value) with a `# key=value`
/// metadata block holding everything needed to re-run it.
struct FigureDataset {
  std::string id;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<FigureRow> rows;

  void add(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double value) { add(std::move(key), format_double(value)); }

  std::optional<std::string> meta(std::string_view key) const {
    for (const auto& [k, v] : metadata)
      if (k == key) return v;
    return std::nullopt;
  }

  /// (tau, value) of one series at one index, in emission order.
  std::pair<std::vector<double>, std::vector<double>> series(std::string_view name, int index = 0) const {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& r : rows)
      if (r.series == name && r.index == index) {
        out.first.push_back(r.tau);
        out.second.push_back(r.value);
      }
    return out;
  }

  std::string csv() const {
    std::ostringstream o;
    for (const auto& [k, v] : metadata) o << "# " << k << '=' << v << '\n';
    o << "series,tau,index,value\n";
    for (const auto& r : rows)
      o << r.series << ',' << format_double(r.tau) << ',' << r.index << ',' << format_double(r.value) << '\n';
    return o.str();
  }
};

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"1a", "1b", "1c", "1d", "2a", "2b", "2c", "2d", "3a", "3b", "4"};
  return ids;
}

/// Pinned settings of figures 1-3 (figure 4 has one config per curve).
inline RunConfig figure_config(std::string_view id) {
  RunConfig c;
  c.mode = Mode::Figure;
  c.figure = std::string(id);
  c.params = make_params(50, 0);
  c.tol = 1e-9;
  if (id.size() == 2 && (id[0] == '1' || id[0] == '2') && id[1] >= 'a' && id[1] <= 'd') {
    const char v = id[1];
    c.flag.rna = v == 'a' || v == 'c';
    c.params.kappa = (v == 'c' || v == 'd') ? 20.0 : 0.0;
    if (id[0] == '1') {
      c.mode = Mode::OneAtom;
      c.initial = "excited";
      c.mmax = 128;
      c.tau_end = 1.0;
      c.samples = 201;
    } else {
      c.mode = Mode::TwoAtom;
      c.initial = "delta";
      c.mmax = c.flag.rna ? 80 : 48;
      c.tau_end = 0.5;
      c.samples = 101;
    }
    return c;
  }
  if (id == "3a" || id == "3b") {
    c.mode = Mode::TwoAtom;
    c.flag.rna = id == "3a";
    c.params.kappa = 20.0;
    c.initial = "delta";
    c.mmax = 16;
    c.tau_end = 4.0;
    c.samples = 401;
    return c;
  }
  throw Error(ErrorCode::UnknownFigure, "unknown figure '" + std::string(id) + "'");
}

/// Curves (a)-(d) of figure 4: full model, initial |d_mn>.
inline std::vector<std::pair<std::string, RunConfig>> figure4_configs() {
  auto make = [](double omega, double kappa, int m, int n) {
    RunConfig c;
    c.mode = Mode::TwoAtom;
    c.figure = "4";
    c.params = make_params(omega, kappa);
    c.flag = ModelFlag::full();
    c.initial = "dark";
    c.dark_m = m;
    c.dark_n = n;
    c.mmax = 24;
    c.tau_end = 2.0;
    c.samples = 201;
    c.tol = 1e-9;
    c.fit_t0 = 1.0;
    c.fit_t1 = 2.0;
    return c;
  };
  return {{"a", make(100, 20, 0, 0)}, {"b", make(50, 100, 0, 0)}, {"c", make(25, 20, 0, 0)}, {"d", make(50, 20, 0, 2)}};
}

namespace detail {

inline void add_run_metadata(FigureDataset& ds, const std::string& prefix, const RunConfig& c) {
  ds.add(prefix + "model", c.flag.rna ? "rna" : "full");
  ds.add(prefix + "omega", c.params.omega);
  ds.add(prefix + "kappa", c.params.kappa);
  ds.add(prefix + "delta", c.params.delta);
  ds.add(prefix + "q1", c.params.q1);
  ds.add(prefix + "q2", c.params.q2);
  ds.add(prefix + "phi", c.params.phi);
  ds.add(prefix + "initial", state_label(c));
  ds.add(prefix + "mmax", std::to_string(c.mmax));
  ds.add(prefix + "tau_end", c.tau_end);
  ds.add(prefix + "samples", std::to_string(c.samples));
  ds.add(prefix + "tol", c.tol);
}

inline void add_stats(FigureDataset& ds, const std::string& prefix, const IntegratorStats& s) {
  ds.add(prefix + "max_boundary_population", s.max_boundary_population);
  ds.add(prefix + "truncation_warning", s.truncation_warning ? "1" : "0");
}

inline void push_distribution(FigureDataset& ds, double tau, const std::vector<double>& p) {
  const int w = static_cast<int>(p.size() / 2);
  for (int m = -w; m <= w; ++m) ds.rows.push_back({"P", tau, m, p[m + w]});
}

inline void check_finite(const FigureDataset& ds) {
  for (const auto& r : ds.rows)
    if (!std::isfinite(r.value))
      throw Error(ErrorCode::StepFailure, "non-finite value in figure " + ds.id + " series " + r.series);
}

}  // namespace detail

/// Figure 1: one atom, series P (index m), width and survival.
/// Figure 2: two atoms, P = first-atom distribution P^(1)_m, width, survival.
/// Figure 3: curve1 = P, curve2 = central and side modes, curve3 = |C_{1,0,0}|^2.
/// Figure 4: survival of curves a-d; fitted rates in the metadata as rate_<x>.
inline FigureDataset run_figure(std::string_view id) {
  FigureDataset ds;
  ds.id = std::string(id);
  ds.add("figure", ds.id);
  ds.add("version", std::string(software_version));

  if (id == "4") {
    const auto curves = figure4_configs();
    ds.add("atoms", "2");
    for (const auto& [name, cfg] : curves) {
      const auto r = decay_run(cfg);
      const std::string pre = name + "_";
      detail::add_run_metadata(ds, pre, cfg);
      detail::add_stats(ds, pre, r.trajectory.stats);
      ds.add(pre + "fit_t0", cfg.fit_t0);
      ds.add(pre + "fit_t1", cfg.fit_t1);
      ds.add("rate_" + name, r.rate);
      ds.add("estimate_" + name, decay_rate_estimate(dark_basis_state(cfg.dark_m, cfg.dark_n), cfg.params).gamma);
      for (std::size_t i = 0; i < r.survival.size(); ++i)
        ds.rows.push_back({name, r.trajectory.times[i], 0, r.survival[i]});
    }
    detail::check_finite(ds);
    return ds;
  }

  const RunConfig cfg = figure_config(id);
  detail::add_run_metadata(ds, "", cfg);
  if (cfg.mode == Mode::OneAtom) {
    ds.add("atoms", "1");
    const auto tr = propagate(one_atom_excited_state(cfg.mmax), cfg.params, cfg.flag, cfg.tau_end, cfg.samples,
                              {.tol = cfg.tol});
    detail::add_stats(ds, "", tr.stats);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const auto p = momentum_distribution_one(tr.states[i]);
      detail::push_distribution(ds, tr.times[i], p);
      ds.rows.push_back({"width", tr.times[i], 0, momentum_width(p)});
      ds.rows.push_back({"survival", tr.times[i], 0, survival_probability(tr.states[i])});
    }
  } else {
    ds.add("atoms", "2");
    const auto tr = propagate(make_two_atom_initial(cfg), cfg.params, cfg.flag, cfg.tau_end, cfg.samples,
                              {.tol = cfg.tol});
    detail::add_stats(ds, "", tr.stats);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const auto& s = tr.states[i];
      const double t = tr.times[i];
      if (id[0] == '2') {
        const auto p = momentum_distribution_first_atom(s);
        detail::push_distribution(ds, t, p);
        ds.rows.push_back({"width", t, 0, momentum_width(p)});
        ds.rows.push_back({"survival", t, 0, survival_probability(s)});
      } else {
        ds.rows.push_back({"curve1", t, 0, survival_probability(s)});
        ds.rows.push_back({"curve2", t, 0, central_mode_population(s)});
        ds.rows.push_back({"curve3", t, 0, std::norm(s(Channel::ExcGnd, 0, 0))});
      }
    }
  }
  detail::check_finite(ds);
  return ds;
}

inline void write_figure(const FigureDataset& ds, const std::string& path) {
  detail::write_text(path, ds.csv());
}

}  // namespace darkcav
