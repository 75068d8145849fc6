#pragma once

#include <cassert>
#include <span>
#include <vector>

#include "darkcav/lattice.hpp"

namespace darkcav {

/// Generator of the two-atom momentum-lattice equations
///   i dC1/dt = w C1 + Omega (C3[m+1,n] + C3[m-1,n])
///   i dC2/dt = w C2 + Omega (C3[m,n+1] + C3[m,n-1])
///   i dC3/dt = (w + Delta - i kappa/2) C3 + Omega (C1[m+-1,n] + C2[m,n+-1])
/// with w = (q1+m)^2 + (q2+n)^2, or 0 in the Raman-Nath approximation.
/// Neighbours outside the window read as zero. The mode phase never enters.
class TwoAtomGenerator {
 public:
  TwoAtomGenerator(int window, const Params& params, ModelFlag flag)
      : window_(window), dim_(2 * window + 1), omega_(params.omega),
        photon_shift_(params.delta, -0.5 * params.kappa),
        kinetic_(static_cast<std::size_t>(dim_) * dim_, 0.0) {
    if (!flag.rna) {
      for (int m = -window; m <= window; ++m)
        for (int n = -window; n <= window; ++n) {
          const double pm = params.q1 + m;
          const double pn = params.q2 + n;
          kinetic_[(m + window) * dim_ + (n + window)] = pm * pm + pn * pn;
        }
    }
  }

  int window() const { return window_; }
  std::size_t size() const { return 3 * kinetic_.size(); }

  /// out = dC/dtau for the flattened amplitudes `in`.
  void apply(std::span<const cplx> in, std::span<cplx> out) const {
    assert(in.size() == size() && out.size() == size());
    const std::size_t plane = kinetic_.size();
    const cplx* c1 = in.data();
    const cplx* c2 = c1 + plane;
    const cplx* c3 = c2 + plane;
    cplx* d1 = out.data();
    cplx* d2 = d1 + plane;
    cplx* d3 = d2 + plane;
    const int d = dim_;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * d + j;
        const double w = kinetic_[k];
        cplx s3m = 0.0, s3n = 0.0, s1m = 0.0, s2n = 0.0;
        if (i + 1 < d) {
          s3m += c3[k + d];
          s1m += c1[k + d];
        }
        if (i > 0) {
          s3m += c3[k - d];
          s1m += c1[k - d];
        }
        if (j + 1 < d) {
          s3n += c3[k + 1];
          s2n += c2[k + 1];
        }
        if (j > 0) {
          s3n += c3[k - 1];
          s2n += c2[k - 1];
        }
        // -i * (H c)
        const cplx h1 = w * c1[k] + omega_ * s3m;
        const cplx h2 = w * c2[k] + omega_ * s3n;
        const cplx h3 = (w + photon_shift_) * c3[k] + omega_ * (s1m + s2n);
        d1[k] = cplx(h1.imag(), -h1.real());
        d2[k] = cplx(h2.imag(), -h2.real());
        d3[k] = cplx(h3.imag(), -h3.real());
      }
    }
  }

 private:
  int window_;
  int dim_;
  double omega_;
  cplx photon_shift_;
  std::vector<double> kinetic_;
};

/// One-atom analogue: channel 1 excited atom, channel 2 photon in the cavity.
class OneAtomGenerator {
 public:
  OneAtomGenerator(int window, const Params& params, ModelFlag flag)
      : window_(window), dim_(2 * window + 1), omega_(params.omega),
        photon_shift_(params.delta, -0.5 * params.kappa), kinetic_(dim_, 0.0) {
    if (!flag.rna) {
      for (int m = -window; m <= window; ++m) {
        const double p = params.q1 + m;
        kinetic_[m + window] = p * p;
      }
    }
  }

  int window() const { return window_; }
  std::size_t size() const { return 2 * kinetic_.size(); }

  void apply(std::span<const cplx> in, std::span<cplx> out) const {
    assert(in.size() == size() && out.size() == size());
    const int d = dim_;
    const cplx* c1 = in.data();
    const cplx* c2 = c1 + d;
    cplx* d1 = out.data();
    cplx* d2 = d1 + d;
    for (int i = 0; i < d; ++i) {
      cplx s1 = 0.0, s2 = 0.0;
      if (i + 1 < d) {
        s1 += c1[i + 1];
        s2 += c2[i + 1];
      }
      if (i > 0) {
        s1 += c1[i - 1];
        s2 += c2[i - 1];
      }
      const cplx h1 = kinetic_[i] * c1[i] + omega_ * s2;
      const cplx h2 = (kinetic_[i] + photon_shift_) * c2[i] + omega_ * s1;
      d1[i] = cplx(h1.imag(), -h1.real());
      d2[i] = cplx(h2.imag(), -h2.real());
    }
  }

 private:
  int window_;
  int dim_;
  double omega_;
  cplx photon_shift_;
  std::vector<double> kinetic_;
};

template <class State>
struct generator_for;
template <>
struct generator_for<TwoAtomState> {
  using type = TwoAtomGenerator;
};
template <>
struct generator_for<OneAtomState> {
  using type = OneAtomGenerator;
};
template <class State>
using generator_for_t = typename generator_for<State>::type;

inline TwoAtomState rhs_two_atom(const TwoAtomState& state, const Params& params, ModelFlag flag) {
  TwoAtomState out(state.window(), state.time());
  TwoAtomGenerator(state.window(), params, flag).apply(state.amps(), out.amps());
  return out;
}

inline OneAtomState rhs_one_atom(const OneAtomState& state, const Params& params, ModelFlag flag) {
  OneAtomState out(state.window(), state.time());
  OneAtomGenerator(state.window(), params, flag).apply(state.amps(), out.amps());
  return out;
}

}  // namespace darkcav
