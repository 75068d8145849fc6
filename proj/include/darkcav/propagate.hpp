#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "darkcav/observables.hpp"
#include "darkcav/rhs.hpp"

namespace darkcav {

struct IntegratorStats {
  double tol = 0.0;
  std::size_t rhs_evaluations = 0;
  std::size_t samples = 0;
  double max_boundary_population = 0.0;
  bool truncation_warning = false;
};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  IntegratorStats stats;

  std::vector<double> survival() const {
    std::vector<double> p;
    p.reserve(states.size());
    for (const auto& s : states) p.push_back(survival_probability(s));
    return p;
  }
};

struct PropagateOptions {
  double tol = 1e-9;
  double truncation_threshold = 1e-6;
  /// Throw TruncationWarning instead of only flagging it in the stats.
  bool strict_truncation = false;
  double initial_step = 1e-4;
  std::size_t max_steps_between_samples = 50'000'000;
};

/// `count` equally spaced times in [t0, t1], both ends included.
inline std::vector<double> uniform_samples(double t0, double t1, std::size_t count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "at least two samples required");
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(count - 1);
  t.back() = t1;
  return t;
}

/// Per-step error target relative to the user tolerance.
inline constexpr double local_tolerance_factor = 0.02;

/// Adaptive Dormand-Prince 5(4) integration of the lattice equations.
/// Snapshots are taken exactly at each requested time; tau_end is appended
/// when the grid stops short of it. Sample times must be strictly increasing
/// and lie in [initial.time(), tau_end].
template <class State>
Trajectory<State> propagate(const State& initial, const Params& params, ModelFlag flag,
                            double tau_end, const std::vector<double>& sample_grid,
                            const PropagateOptions& opts = {}) {
  namespace odeint = boost::numeric::odeint;
  using Vec = std::vector<cplx>;
  validate(params);
  const double t0 = initial.time();
  if (!(tau_end > 0.0) || !(tau_end > t0))
    throw Error(ErrorCode::InvalidArgument, "tau_end must exceed the initial time and 0");
  if (!(opts.tol >= 1e-12 && opts.tol <= 1e-4))
    throw Error(ErrorCode::InvalidArgument, "tol must lie in [1e-12, 1e-4]");

  std::vector<double> times;
  times.reserve(sample_grid.size() + 2);
  for (double t : sample_grid) {
    if (t < t0 - 1e-15 || t > tau_end + 1e-15)
      throw Error(ErrorCode::InvalidArgument, "sample time outside [t0, tau_end]");
    if (!times.empty() && !(t > times.back()))
      throw Error(ErrorCode::InvalidArgument, "sample grid must be strictly increasing");
    times.push_back(t);
  }
  if (times.empty() || times.back() < tau_end) times.push_back(tau_end);
  const bool record_start = times.front() <= t0;
  if (!record_start) times.insert(times.begin(), t0);
  times.front() = t0;

  using Generator = generator_for_t<State>;
  const Generator gen(initial.window(), params, flag);
  std::size_t evaluations = 0;
  auto system = [&](const Vec& x, Vec& dxdt, double /*t*/) {
    ++evaluations;
    gen.apply(x, dxdt);
  };

  Trajectory<State> traj;
  traj.stats.tol = opts.tol;
  Vec x = initial.storage();
  bool first = true;
  auto observer = [&](const Vec& xs, double t) {
    if (first && !record_start) {
      first = false;
      return;
    }
    first = false;
    State snap(initial.window(), t);
    snap.storage() = xs;
    for (const auto& a : xs)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw Error(ErrorCode::StepFailure, "non-finite amplitude at tau=" + std::to_string(t));
    traj.stats.max_boundary_population =
        std::max(traj.stats.max_boundary_population, boundary_population(snap));
    traj.times.push_back(t);
    traj.states.push_back(std::move(snap));
  };

  const double local_tol = opts.tol * local_tolerance_factor;
  auto stepper = odeint::make_controlled(local_tol, local_tol, odeint::runge_kutta_dopri5<Vec>());
  const double dt0 = std::min(opts.initial_step, (tau_end - t0) / 10.0);
  try {
    odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt0, observer,
                            odeint::max_step_checker(static_cast<int>(std::min<std::size_t>(
                                opts.max_steps_between_samples, 2'000'000'000))));
  } catch (const odeint::odeint_error& e) {
    throw Error(ErrorCode::StepFailure, e.what());
  }

  traj.stats.rhs_evaluations = evaluations;
  traj.stats.samples = traj.times.size();
  traj.stats.truncation_warning = traj.stats.max_boundary_population > opts.truncation_threshold;
  if (traj.stats.truncation_warning && opts.strict_truncation) {
    throw Error(ErrorCode::TruncationWarning,
                "boundary shell population " + std::to_string(traj.stats.max_boundary_population));
  }
  return traj;
}

template <class State>
Trajectory<State> propagate(const State& initial, const Params& params, ModelFlag flag,
                            double tau_end, std::size_t samples, const PropagateOptions& opts = {}) {
  return propagate(initial, params, flag, tau_end, uniform_samples(initial.time(), tau_end, samples),
                   opts);
}

}  // namespace darkcav
