#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "darkcav/lattice.hpp"

namespace darkcav {

/// P_m = |C_{1,m}|^2 + |C_{2,m}|^2, indexed by m + window.
inline std::vector<double> momentum_distribution_one(const OneAtomState& s) {
  std::vector<double> p(s.dim(), 0.0);
  for (int m = -s.window(); m <= s.window(); ++m)
    p[m + s.window()] = std::norm(s(1, m)) + std::norm(s(2, m));
  return p;
}

/// P^(1)_m = sum over channels and n of |C_{i,m,n}|^2, indexed by m + window.
inline std::vector<double> momentum_distribution_first_atom(const TwoAtomState& s) {
  const int w = s.window();
  std::vector<double> p(s.dim(), 0.0);
  for (int c = 1; c <= 3; ++c)
    for (int m = -w; m <= w; ++m)
      for (int n = -w; n <= w; ++n) p[m + w] += std::norm(s(static_cast<Channel>(c), m, n));
  return p;
}

inline double survival_probability(const TwoAtomState& s) { return s.norm2(); }
inline double survival_probability(const OneAtomState& s) { return s.norm2(); }

/// Root of the second central moment of a distribution over m = -window..window.
inline double momentum_width(const std::vector<double>& dist) {
  const int w = static_cast<int>(dist.size() / 2);
  double total = 0.0, first = 0.0, second = 0.0;
  for (int m = -w; m <= w; ++m) {
    const double p = dist[m + w];
    total += p;
    first += p * m;
    second += p * m * m;
  }
  if (total <= 0.0) return 0.0;
  const double mean = first / total;
  return std::sqrt(std::max(0.0, second / total - mean * mean));
}

/// Population on the outermost shell |m| = window or |n| = window.
inline double boundary_population(const TwoAtomState& s) {
  const int w = s.window();
  double sum = 0.0;
  for (int c = 1; c <= 3; ++c)
    for (int m = -w; m <= w; ++m)
      for (int n = -w; n <= w; ++n)
        if (std::abs(m) == w || std::abs(n) == w) sum += std::norm(s(static_cast<Channel>(c), m, n));
  return sum;
}

inline double boundary_population(const OneAtomState& s) {
  const int w = s.window();
  return std::norm(s(1, w)) + std::norm(s(1, -w)) + std::norm(s(2, w)) + std::norm(s(2, -w));
}

/// Norm of the part of the state lying in parity class `cls`.
inline double class_norm(const TwoAtomState& s, ParityClass cls) {
  double sum = 0.0;
  for_each_index(s, [&](const LatticeIndex& idx) {
    if (parity_class(idx) == cls) sum += std::norm(s(idx.channel, idx.m, idx.n));
  });
  return std::sqrt(sum);
}

/// |C_{1,0,0}|^2 + |C_{1,0,+-2}|^2 + |C_{1,+-2,0}|^2 + |C_{2,+-1,+-1}|^2.
inline double central_mode_population(const TwoAtomState& s) {
  double sum = std::norm(s.at(Channel::ExcGnd, 0, 0));
  for (int k : {-2, 2}) sum += std::norm(s.at(Channel::ExcGnd, 0, k)) + std::norm(s.at(Channel::ExcGnd, k, 0));
  for (int a : {-1, 1})
    for (int b : {-1, 1}) sum += std::norm(s.at(Channel::GndExc, a, b));
  return sum;
}

/// <a|b> over the common window.
inline cplx inner_product(const TwoAtomState& a, const TwoAtomState& b) {
  cplx sum = 0.0;
  const int w = std::min(a.window(), b.window());
  for (int c = 1; c <= 3; ++c)
    for (int m = -w; m <= w; ++m)
      for (int n = -w; n <= w; ++n) {
        const auto ch = static_cast<Channel>(c);
        sum += std::conj(a(ch, m, n)) * b(ch, m, n);
      }
  return sum;
}

}  // namespace darkcav
