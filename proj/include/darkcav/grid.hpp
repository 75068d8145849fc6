#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "darkcav/fft.hpp"
#include "darkcav/field.hpp"
#include "darkcav/lattice.hpp"
#include "darkcav/rna.hpp"

namespace darkcav {

namespace detail {
/// Signed momentum index of DFT bin k.
inline int dft_index(std::size_t k, std::size_t g) {
  return k < g / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(g);
}
}  // namespace detail

/// Kinetic energy of spectral mode (i, j): (q1 + m)^2 + (q2 + n)^2 on the
/// periodic grid, (q/N)^2 + (r/N)^2 with q = i + 1, r = j + 1 in the square well.
inline std::vector<double> kinetic_spectrum(const PositionField& f, const Params& p) {
  const std::size_t g = f.grid();
  std::vector<double> e(g * g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      double a, b;
      if (f.boundary() == Boundary::Periodic) {
        a = p.q1 + detail::dft_index(i, g);
        b = p.q2 + detail::dft_index(j, g);
      } else {
        a = static_cast<double>(i + 1) / f.trap_wavenumber();
        b = static_cast<double>(j + 1) / f.trap_wavenumber();
      }
      e[i * g + j] = a * a + b * b;
    }
  return e;
}

/// Strang split-step propagator for the coordinate-space equations:
/// half kinetic step (Fourier or sine basis), exact pointwise 3x3 coupling
/// step, half kinetic step. Consecutive half steps are fused.
class SplitStepPropagator {
 public:
  static constexpr double stability_limit = 0.5;

  SplitStepPropagator(const PositionField& geometry, const Params& params, double dtau)
      : boundary_(geometry.boundary()), grid_(geometry.grid()), dtau_(dtau), params_(params) {
    validate(params);
    if (!(dtau > 0)) throw Error(ErrorCode::InvalidArgument, "dtau must be > 0");
    const auto energy = kinetic_spectrum(geometry, params);
    const double emax = *std::max_element(energy.begin(), energy.end());
    if (dtau * emax >= stability_limit) {
      throw Error(ErrorCode::StabilityViolation,
                  "dtau * max kinetic eigenvalue = " + std::to_string(dtau * emax) + " >= 0.5");
    }
    const double g = static_cast<double>(grid_);
    const double scale = boundary_ == Boundary::Periodic ? 1.0 / (g * g)
                                                         : 1.0 / (4.0 * (g + 1) * (g + 1));
    half_.resize(energy.size());
    full_.resize(energy.size());
    for (std::size_t k = 0; k < energy.size(); ++k) {
      half_[k] = std::exp(-I * energy[k] * (0.5 * dtau)) * scale;
      full_[k] = std::exp(-I * energy[k] * dtau) * scale;
    }
    coupling_.reserve(grid_ * grid_);
    for (std::size_t i = 0; i < grid_; ++i) {
      const double c1 = std::cos(geometry.coordinate(i) + params.phi);
      for (std::size_t j = 0; j < grid_; ++j) {
        const double c2 = std::cos(geometry.coordinate(j) + params.phi);
        coupling_.push_back(rna_pointwise_propagator(c1, c2, params, dtau));
      }
    }
    if (boundary_ == Boundary::Periodic)
      dft_ = std::make_unique<fft::Dft2d>(grid_);
    else
      dst_ = std::make_unique<fft::Dst2d>(grid_);
  }

  double dtau() const { return dtau_; }

  void evolve(PositionField& f, std::size_t steps) const {
    if (f.grid() != grid_ || f.boundary() != boundary_)
      throw Error(ErrorCode::WrongBoundary, "field geometry differs from the propagator's");
    if (steps == 0) return;
    kinetic(f, half_);
    for (std::size_t s = 0; s < steps; ++s) {
      couple(f);
      kinetic(f, s + 1 < steps ? full_ : half_);
    }
    f.set_time(f.time() + dtau_ * static_cast<double>(steps));
    f.set_phi(params_.phi);
  }

 private:
  void kinetic(PositionField& f, const std::vector<cplx>& phase) const {
    for (int c = 1; c <= 3; ++c) {
      auto& data = f.channel(c);
      if (dft_) {
        dft_->forward(data);
        for (std::size_t k = 0; k < data.size(); ++k) data[k] *= phase[k];
        dft_->backward(data);
      } else {
        dst_->transform(data);
        for (std::size_t k = 0; k < data.size(); ++k) data[k] *= phase[k];
        dst_->transform(data);
      }
    }
  }

  void couple(PositionField& f) const {
    auto& a = f.channel(1);
    auto& b = f.channel(2);
    auto& c = f.channel(3);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const auto t = coupling_[k].apply({a[k], b[k], c[k]});
      a[k] = t.a1;
      b[k] = t.a2;
      c[k] = t.a3;
    }
  }

  Boundary boundary_;
  std::size_t grid_;
  double dtau_;
  Params params_;
  std::vector<cplx> half_, full_;
  std::vector<PointwisePropagator> coupling_;
  std::unique_ptr<fft::Dft2d> dft_;
  std::unique_ptr<fft::Dst2d> dst_;
};

/// Full-model coordinate-space evolution over `steps` steps of size dtau.
/// Uses params.phi as mode phase and stamps it on the result.
inline PositionField grid_evolve(PositionField field, const Params& params, double dtau,
                                 std::size_t steps) {
  SplitStepPropagator(field, params, dtau).evolve(field, steps);
  return field;
}

/// Raman-Nath evolution on the grid: pointwise exact, no kinetic step.
inline PositionField grid_evolve_rna(PositionField field, const Params& params, double tau) {
  const std::size_t g = field.grid();
  for (std::size_t i = 0; i < g; ++i) {
    const double c1 = std::cos(field.coordinate(i) + params.phi);
    for (std::size_t j = 0; j < g; ++j) {
      const double c2 = std::cos(field.coordinate(j) + params.phi);
      const auto u = rna_pointwise_propagator(c1, c2, params, tau);
      const auto t = u.apply({field(1, i, j), field(2, i, j), field(3, i, j)});
      field(1, i, j) = t.a1;
      field(2, i, j) = t.a2;
      field(3, i, j) = t.a3;
    }
  }
  field.set_time(field.time() + tau);
  field.set_phi(params.phi);
  return field;
}

// ---------------------------------------------------------------------------
// Lattice <-> periodic grid
// ---------------------------------------------------------------------------

/// Momentum amplitudes C_{i,m,n} of a periodic field, |m|,|n| <= window < G/2.
inline TwoAtomState field_to_lattice(const PositionField& f, int window) {
  if (f.boundary() != Boundary::Periodic)
    throw Error(ErrorCode::WrongBoundary, "momentum lattice needs a periodic field");
  const std::size_t g = f.grid();
  if (2 * static_cast<std::size_t>(window) >= g)
    throw Error(ErrorCode::InvalidArgument, "window must be < G/2");
  const fft::Dft2d dft(g);
  const double h = f.spacing();
  const double norm = 1.0 / static_cast<double>(g * g);
  TwoAtomState s(window, f.time());
  for (int c = 1; c <= 3; ++c) {
    auto data = f.channel(c);
    dft.forward(data);
    for (int m = -window; m <= window; ++m)
      for (int n = -window; n <= window; ++n) {
        const std::size_t i = static_cast<std::size_t>((m + static_cast<int>(g)) % static_cast<int>(g));
        const std::size_t j = static_cast<std::size_t>((n + static_cast<int>(g)) % static_cast<int>(g));
        s(static_cast<Channel>(c), m, n) = data[i * g + j] * norm * std::exp(-I * (0.5 * h * (m + n)));
      }
  }
  return s;
}

/// Periodic field sum_{m,n} C_{i,m,n} exp(i (m xi1 + n xi2)) sampled on a G x G grid.
inline PositionField lattice_to_field(const TwoAtomState& s, std::size_t g, double phi = 0.0) {
  const int w = s.window();
  if (2 * static_cast<std::size_t>(w) >= g)
    throw Error(ErrorCode::InvalidArgument, "window must be < G/2");
  PositionField f(Boundary::Periodic, g, 1.0, phi, s.time());
  const fft::Dft2d dft(g);
  const double h = f.spacing();
  for (int c = 1; c <= 3; ++c) {
    auto& data = f.channel(c);
    for (int m = -w; m <= w; ++m)
      for (int n = -w; n <= w; ++n) {
        const std::size_t i = static_cast<std::size_t>((m + static_cast<int>(g)) % static_cast<int>(g));
        const std::size_t j = static_cast<std::size_t>((n + static_cast<int>(g)) % static_cast<int>(g));
        data[i * g + j] = s(static_cast<Channel>(c), m, n) * std::exp(I * (0.5 * h * (m + n)));
      }
    dft.backward(data);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Square-well eigenbasis
// ---------------------------------------------------------------------------

/// Coefficients of one channel on psi_q(x1) psi_r(x2), psi_q = sqrt(2/L) sin(q pi x / L),
/// for q, r = 1..G (index (q-1) G + (r-1)).
struct TrapCoefficients {
  std::size_t grid = 0;
  std::vector<cplx> values;

  cplx operator()(std::size_t q, std::size_t r) const { return values[(q - 1) * grid + (r - 1)]; }
  double norm2() const {
    double s = 0;
    for (const auto& v : values) s += std::norm(v);
    return s;
  }
};

inline TrapCoefficients trap_eigenexpand(const PositionField& f, int channel) {
  if (f.boundary() != Boundary::Dirichlet)
    throw Error(ErrorCode::WrongBoundary, "sine expansion needs a Dirichlet field");
  const std::size_t g = f.grid();
  TrapCoefficients out{g, f.channel(channel)};
  fft::Dst2d(g).transform(out.values);
  const double h = f.spacing();
  const double scale = h * h * (2.0 / f.length()) / 4.0;
  for (auto& v : out.values) v *= scale;
  return out;
}

/// All three channels.
inline std::array<TrapCoefficients, 3> trap_eigenexpand(const PositionField& f) {
  return {trap_eigenexpand(f, 1), trap_eigenexpand(f, 2), trap_eigenexpand(f, 3)};
}

/// Field built from sine-basis coefficients of channel 1..3 (inverse of trap_eigenexpand).
inline PositionField trap_synthesize(const std::array<TrapCoefficients, 3>& coeffs,
                                     double trap_wavenumber) {
  const std::size_t g = coeffs[0].grid;
  PositionField f(Boundary::Dirichlet, g, trap_wavenumber);
  const fft::Dst2d dst(g);
  const double amp = 2.0 / f.length() / 4.0;
  for (int c = 1; c <= 3; ++c) {
    auto& data = f.channel(c);
    data = coeffs[c - 1].values;
    dst.transform(data);
    for (auto& v : data) v *= amp;
  }
  return f;
}

}  // namespace darkcav
