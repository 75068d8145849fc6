#pragma once

#include <complex>
#include <numbers>

#include "darkcav/error.hpp"

namespace darkcav {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = std::numbers::pi;

// All rates and energies are in units of the recoil frequency, times are
// tau = w_rec * t and hbar = 1.
struct Params {
  double omega = 50.0;  // g / (2 w_rec)
  double kappa = 0.0;   // cavity decay / w_rec
  double delta = 0.0;   // atom-cavity detuning / w_rec, cavity shift absorbed
  double q1 = 0.0;      // residual quasi-momentum of atom 1 in units of hbar k
  double q2 = 0.0;
  double phi = 0.0;  // mode phase; only the position-grid propagators read it
};

/// Selects the kinetic-energy treatment of the lattice equations.
struct ModelFlag {
  bool rna = false;  // true: Raman-Nath (kinetic phases dropped)

  static constexpr ModelFlag raman_nath() { return ModelFlag{true}; }
  static constexpr ModelFlag full() { return ModelFlag{false}; }
};

inline void validate(const Params& p) {
  if (!(p.omega > 0.0)) throw Error(ErrorCode::NonPositiveCoupling, "omega must be > 0");
  if (!(p.kappa >= 0.0)) throw Error(ErrorCode::NegativeDamping, "kappa must be >= 0");
  if (!(p.q1 >= 0.0 && p.q1 < 1.0) || !(p.q2 >= 0.0 && p.q2 < 1.0)) {
    throw Error(ErrorCode::QuasiMomentumRange, "quasi-momenta must lie in [0, 1)");
  }
}

inline Params make_params(double omega, double kappa, double delta = 0.0, double q1 = 0.0,
                          double q2 = 0.0, double phi = 0.0) {
  Params p{omega, kappa, delta, q1, q2, phi};
  validate(p);
  return p;
}

}  // namespace darkcav
