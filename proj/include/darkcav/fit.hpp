#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "darkcav/error.hpp"

namespace darkcav {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares on the points with lo <= x <= hi.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                            double lo = -INFINITY, double hi = INFINITY) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "linear_fit: size mismatch");
  double n = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo && x[i] <= hi) {
      n += 1;
      sx += x[i];
      sy += y[i];
    }
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "linear_fit: fewer than two points in range");
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo && x[i] <= hi) {
      const double dx = x[i] - mx, dy = y[i] - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points = static_cast<std::size_t>(n);
  return f;
}

/// Rate gamma of P ~ exp(-gamma tau) from a log-linear fit over [t0, t1].
inline double fit_decay_rate(std::span<const double> tau, std::span<const double> p, double t0,
                             double t1) {
  std::vector<double> logp(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) logp[i] = std::log(std::max(p[i], 1e-300));
  return -linear_fit(tau, logp, t0, t1).slope;
}

struct Plateau {
  double onset = 0.0;  // earliest tau from which |dP/dtau| stays below threshold for `span`
  double value = 0.0;  // last sample of the series
};

/// Plateau := |dP/dtau| < threshold sustained over a stretch of length `span`.
inline std::optional<Plateau> detect_plateau(std::span<const double> tau, std::span<const double> p,
                                             double threshold = 1e-4, double span = 0.5) {
  if (tau.size() < 2 || tau.size() != p.size()) return std::nullopt;
  std::size_t start = 0;
  bool running = false;
  for (std::size_t i = 1; i < tau.size(); ++i) {
    const double slope = (p[i] - p[i - 1]) / (tau[i] - tau[i - 1]);
    if (std::abs(slope) < threshold) {
      if (!running) {
        running = true;
        start = i - 1;
      }
      if (tau[i] - tau[start] >= span - 1e-12) return Plateau{tau[start], p.back()};
    } else {
      running = false;
    }
  }
  return std::nullopt;
}

/// Index of the first interior sample that is >= both neighbours and > the previous one.
inline std::optional<std::size_t> first_local_maximum(std::span<const double> y) {
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) return i;
  return std::nullopt;
}

}  // namespace darkcav
