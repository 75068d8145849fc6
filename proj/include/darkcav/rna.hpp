#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "darkcav/field.hpp"

namespace darkcav {

/// Pointwise rates of the Raman-Nath 3x3 system. lambda1 is exactly zero.
struct EigenTriple {
  cplx lambda1{}, lambda2{}, lambda3{};
};

/// Inputs are the mode phases k x1 and k x2 (any mode phase already added).
inline EigenTriple rna_eigenvalues(double x1k, double x2k, const Params& p) {
  const double c1 = std::cos(x1k), c2 = std::cos(x2k);
  const cplx shift(0.25 * p.kappa, 0.5 * p.delta);  // kappa/4 + i Delta/2
  const cplx root = std::sqrt(shift * shift - 4.0 * p.omega * p.omega * (c1 * c1 + c2 * c2));
  return {cplx{}, -shift + root, -shift - root};
}

/// Exact propagator of i dA/dtau = H A with
///   H = [[0, 0, 2 Omega c1], [0, 0, 2 Omega c2], [2 Omega c1, 2 Omega c2, Delta - i kappa/2]].
/// The dark direction (c2, -c1, 0) is stationary; the bright direction and the
/// photon channel form a 2x2 block solved in closed form.
struct PointwisePropagator {
  std::array<cplx, 9> u{};  // row-major
  bool degenerate = false;  // lambda2 == lambda3, limiting formula used

  PointwiseTriple apply(const PointwiseTriple& a) const {
    return {u[0] * a.a1 + u[1] * a.a2 + u[2] * a.a3, u[3] * a.a1 + u[4] * a.a2 + u[5] * a.a3,
            u[6] * a.a1 + u[7] * a.a2 + u[8] * a.a3};
  }
};

inline PointwisePropagator rna_pointwise_propagator(double c1, double c2, const Params& p,
                                                    double tau) {
  const double s2 = c1 * c1 + c2 * c2;
  const cplx a = 0.5 * cplx(p.delta, -0.5 * p.kappa);  // half the photon-channel shift
  const double rabi2 = 4.0 * p.omega * p.omega * s2;
  const cplx disc = a * a + rabi2;
  const cplx mu = std::sqrt(disc);
  const cplx e = std::exp(-I * a * tau);

  PointwisePropagator out;
  // lambda2 - lambda3 = 2 i mu, tested through mu^2.
  out.degenerate = std::abs(disc) <= 1e-12 * (std::norm(a) + rabi2);
  cplx cs, sn;  // cos(mu tau), sin(mu tau) / mu
  const cplx z = mu * tau;
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    cs = 1.0 - z2 / 2.0 + z2 * z2 / 24.0;
    sn = tau * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
  } else {
    cs = std::cos(z);
    sn = std::sin(z) / mu;
  }

  const cplx bright = e * (cs + I * a * sn);  // <b|U|b>
  const cplx photon = e * (cs - I * a * sn);  // <3|U|3>
  const cplx cross = -I * e * sn * (2.0 * p.omega);  // <3|U|b> / s
  auto& u = out.u;
  if (s2 < 1e-14) {
    u = {1.0, 0.0, cross * c1, 0.0, 1.0, cross * c2, cross * c1, cross * c2, photon};
    return out;
  }
  const cplx g = (bright - 1.0) / s2;
  u[0] = 1.0 + g * c1 * c1;
  u[1] = g * c1 * c2;
  u[2] = cross * c1;
  u[3] = g * c1 * c2;
  u[4] = 1.0 + g * c2 * c2;
  u[5] = cross * c2;
  u[6] = cross * c1;
  u[7] = cross * c2;
  u[8] = photon;
  return out;
}

struct PointwiseResult {
  PointwiseTriple value;
  bool degenerate = false;
};

inline PointwiseResult rna_pointwise_propagate(const PointwiseTriple& triple, double x1k, double x2k,
                                               const Params& p, double tau) {
  if (tau < 0) throw Error(ErrorCode::InvalidArgument, "tau must be >= 0");
  const auto prop = rna_pointwise_propagator(std::cos(x1k), std::cos(x2k), p, tau);
  return {prop.apply(triple), prop.degenerate};
}

/// Long-time limit of the lossy Raman-Nath dynamics at one point: the projection
/// onto the local dark direction (cos kx2, -cos kx1, 0). Not normalized.
inline PointwiseTriple asymptotic_state(const PointwiseTriple& t, double x1k, double x2k) {
  const double c1 = std::cos(x1k), c2 = std::cos(x2k);
  const double s2 = c1 * c1 + c2 * c2;
  if (s2 < 1e-24) throw Error(ErrorCode::NodePoint, "both mode cosines vanish");
  const cplx coeff = (t.a1 * c2 - t.a2 * c1) / s2;
  return {coeff * c2, -coeff * c1, cplx{}};
}

/// ||C1 cos(kx1) + C2 cos(kx2)|| + ||C3||, zero exactly on dark fields.
/// Uses the field's own mode phase.
inline double darkness_residual(const PositionField& f) {
  const std::size_t g = f.grid();
  double source = 0.0, photon = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    const double c1 = std::cos(f.coordinate(i) + f.phi());
    for (std::size_t j = 0; j < g; ++j) {
      const double c2 = std::cos(f.coordinate(j) + f.phi());
      source += std::norm(f(1, i, j) * c1 + f(2, i, j) * c2);
      photon += std::norm(f(3, i, j));
    }
  }
  return std::sqrt(source * f.weight()) + std::sqrt(photon * f.weight());
}

}  // namespace darkcav
