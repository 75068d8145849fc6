#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "darkcav/field.hpp"
#include "darkcav/lattice.hpp"

namespace darkcav {

// ---------------------------------------------------------------------------
// Dark basis |d_mn>
// ---------------------------------------------------------------------------

struct BasisComponent {
  LatticeIndex index;
  double weight = 0.0;
};

/// |d_mn> = 1/2 ( |(e,m),(g,n)> + |(e,m),(g,n+2)> - |(g,m+1),(e,n+1)> - |(g,m-1),(e,n+1)> ),
/// the plane wave exp(i m xi1 + i (n+1) xi2) times the dark direction.
struct DarkBasisState {
  int m = 0;
  int n = 0;
  std::array<BasisComponent, 4> components{};

  /// Smallest window that holds every component.
  int required_window() const {
    int w = 0;
    for (const auto& c : components) w = std::max({w, std::abs(c.index.m), std::abs(c.index.n)});
    return w;
  }

  TwoAtomState state(int window) const {
    if (window < required_window())
      throw Error(ErrorCode::WindowTooSmall, "window cannot hold |d_" + std::to_string(m) + "," +
                                                 std::to_string(n) + ">");
    TwoAtomState s(window);
    for (const auto& c : components) s(c.index.channel, c.index.m, c.index.n) += c.weight;
    return s;
  }
};

inline DarkBasisState dark_basis_state(int m, int n) {
  DarkBasisState d;
  d.m = m;
  d.n = n;
  d.components = {{{{Channel::ExcGnd, m, n}, 0.5},
                   {{Channel::ExcGnd, m, n + 2}, 0.5},
                   {{Channel::GndExc, m + 1, n + 1}, -0.5},
                   {{Channel::GndExc, m - 1, n + 1}, -0.5}}};
  return d;
}

/// Validating form: throws WindowTooSmall when `window` cannot hold the state.
inline DarkBasisState dark_basis_state(int m, int n, int window) {
  auto d = dark_basis_state(m, n);
  if (window < d.required_window())
    throw Error(ErrorCode::WindowTooSmall, "window too small for requested dark basis state");
  return d;
}

inline double overlap(const DarkBasisState& a, const DarkBasisState& b) {
  double s = 0.0;
  for (const auto& x : a.components)
    for (const auto& y : b.components)
      if (x.index.channel == y.index.channel && x.index.m == y.index.m && x.index.n == y.index.n)
        s += x.weight * y.weight;
  return s;
}

/// RMS momentum indices (m~, n~) over the components, weighted by |weight|^2.
inline std::pair<double, double> typical_indices(const DarkBasisState& d) {
  double wsum = 0, m2 = 0, n2 = 0;
  for (const auto& c : d.components) {
    const double w = c.weight * c.weight;
    wsum += w;
    m2 += w * c.index.m * c.index.m;
    n2 += w * c.index.n * c.index.n;
  }
  return {std::sqrt(m2 / wsum), std::sqrt(n2 / wsum)};
}

// ---------------------------------------------------------------------------
// Momentum amplitudes of the asymptotic dark state |D_00^eg>
// ---------------------------------------------------------------------------

namespace detail {
using mp_real = boost::multiprecision::cpp_bin_float_100;

/// Imaginary parts J_m of I_m = i J_m for m = -1..max_m.
inline std::vector<mp_real> i_sequence_imag(int max_m) {
  std::vector<mp_real> j(static_cast<std::size_t>(max_m) + 2);
  const mp_real half_pi = boost::multiprecision::atan(mp_real(1)) * 2;
  j[0] = half_pi;  // m = -1
  j[1] = half_pi;  // m = 0
  for (int m = 1; m <= max_m; ++m) {
    const mp_real sign = (m % 2 == 1) ? 1 : -1;  // (-1)^(m-1)
    j[m + 1] = (sign * 4 - mp_real(6 * m - 3) * j[m] - mp_real(m - 1) * j[m - 1]) / m;
  }
  return j;
}
}  // namespace detail

/// I_m for m = -1..max_m (index m + 1), from the three-term recurrence with
/// I_0 = I_{-1} = i pi/2. The recurrence is unstable forward, so it is run in
/// 100-digit arithmetic and rounded at the end.
inline std::vector<cplx> compute_I_sequence(int max_m) {
  if (max_m < 0) throw Error(ErrorCode::InvalidArgument, "max_m must be >= 0");
  const auto j = detail::i_sequence_imag(max_m);
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& v : j) out.emplace_back(0.0, static_cast<double>(v));
  return out;
}

enum class Provenance { Recurrence, Quadrature };

inline std::string_view to_string(Provenance p) {
  return p == Provenance::Recurrence ? "recurrence" : "quadrature";
}

/// c_{i,m,n} = <(e/g,m),(g/e,n)|D_00^eg> for channels 1 and 2 on |m|,|n| <= window.
class DarkTable {
 public:
  DarkTable() = default;
  DarkTable(int window, Provenance provenance)
      : window_(window), dim_(2 * window + 1), provenance_(provenance),
        c_(2, std::vector<cplx>(static_cast<std::size_t>(dim_) * dim_)) {}

  int window() const { return window_; }
  Provenance provenance() const { return provenance_; }
  const std::vector<cplx>& I_sequence() const { return i_seq_; }
  void set_I_sequence(std::vector<cplx> seq) { i_seq_ = std::move(seq); }

  bool contains(int m, int n) const { return std::abs(m) <= window_ && std::abs(n) <= window_; }
  cplx& operator()(int channel, int m, int n) {
    return c_[channel - 1][(m + window_) * dim_ + (n + window_)];
  }
  const cplx& operator()(int channel, int m, int n) const {
    return c_[channel - 1][(m + window_) * dim_ + (n + window_)];
  }
  /// Zero outside the window.
  cplx at(int channel, int m, int n) const {
    return contains(m, n) ? (*this)(channel, m, n) : cplx{};
  }

  /// Max |lhs| of c1[m,n] + c1[m+2,n] + c2[m+1,n+1] + c2[m+1,n-1] = 0 over even
  /// (m,n) whose stencil fits the window.
  double rel1_residual() const {
    double r = 0.0;
    for (int m = -window_; m + 2 <= window_; ++m)
      for (int n = -window_ + 1; n + 1 <= window_; ++n) {
        if (!is_even(m) || !is_even(n)) continue;
        const cplx lhs = (*this)(1, m, n) + (*this)(1, m + 2, n) + (*this)(2, m + 1, n + 1) +
                         (*this)(2, m + 1, n - 1);
        r = std::max(r, std::abs(lhs));
      }
    return r;
  }

  /// Max |lhs - rhs| of c1[m,n] + c1[m,n+2] - c2[m+1,n+1] - c2[m-1,n+1]
  ///   = delta_{m,0} (delta_{n,0} + delta_{n,-2}).
  double rel2_residual() const {
    double r = 0.0;
    for (int m = -window_ + 1; m + 1 <= window_; ++m)
      for (int n = -window_; n + 2 <= window_; ++n) {
        if (!is_even(m) || !is_even(n)) continue;
        const double src = (m == 0 && (n == 0 || n == -2)) ? 1.0 : 0.0;
        const cplx lhs = (*this)(1, m, n) + (*this)(1, m, n + 2) - (*this)(2, m + 1, n + 1) -
                         (*this)(2, m - 1, n + 1);
        r = std::max(r, std::abs(lhs - src));
      }
    return r;
  }

  /// Sum of |c|^2 over |m| + |n| <= radius (both channels).
  double population_within(int radius) const {
    double s = 0.0;
    for (int ch = 1; ch <= 2; ++ch)
      for (int m = -window_; m <= window_; ++m)
        for (int n = -window_; n <= window_; ++n)
          if (std::abs(m) + std::abs(n) <= radius) s += std::norm((*this)(ch, m, n));
    return s;
  }

 private:
  int window_ = 0;
  int dim_ = 0;
  Provenance provenance_ = Provenance::Recurrence;
  std::vector<cplx> i_seq_;
  std::vector<std::vector<cplx>> c_;
};

/// Fills the table from the axis values c_{1,2m,0} = delta_{m,0} + (i/2pi)(I_m + I_{m-1}),
/// then marches outward in n: the first sum rule gives the next odd channel-2
/// row, the second (with its source) the next even channel-1 row. Reflection
/// symmetry supplies n < 0. The unused exchange relations
///   c1[m,n] + c1[n,m] = delta_{m,0} delta_{n,0},  c2[m,n] = c2[n,m]
/// serve as the closure check.
inline DarkTable dark_amplitudes(int window) {
  using detail::mp_real;
  if (window < 4) throw Error(ErrorCode::WindowTooSmall, "dark table window must be >= 4");
  const int reach = 2 * window + 8;  // m-range of the axis; each row pair consumes 2
  const int rows = window + 2;
  const int mi = reach / 2 + 1;
  const auto jseq = detail::i_sequence_imag(mi);
  const mp_real two_pi = boost::multiprecision::atan(mp_real(1)) * 8;

  const int d = 2 * reach + 1;
  // c1 on even rows, c2 on odd rows, 0 <= n <= rows + 1.
  std::vector<std::vector<mp_real>> grid(rows + 2, std::vector<mp_real>(d, mp_real(0)));
  std::vector<std::vector<bool>> known(rows + 2, std::vector<bool>(d, false));
  auto col = [&](int m) { return m + reach; };

  for (int j = 0; 2 * j <= reach; ++j) {
    const mp_real v = (j == 0 ? mp_real(1) : mp_real(0)) - (jseq[j + 1] + jseq[j]) / two_pi;
    grid[0][col(2 * j)] = v;
    grid[0][col(-2 * j)] = v;
    known[0][col(2 * j)] = known[0][col(-2 * j)] = true;
  }

  for (int n = 0; n + 2 <= rows + 1; n += 2) {
    // odd row n + 1 (channel 2) from the first sum rule at row n
    for (int m = -reach; m + 2 <= reach; m += 2) {
      if (!(known[n][col(m)] && known[n][col(m + 2)])) continue;
      const mp_real pair = grid[n][col(m)] + grid[n][col(m + 2)];
      if (n == 0) {
        grid[1][col(m + 1)] = -pair / 2;  // c2[m+1, 1] = c2[m+1, -1]
      } else {
        if (!known[n - 1][col(m + 1)]) continue;
        grid[n + 1][col(m + 1)] = -pair - grid[n - 1][col(m + 1)];
      }
      known[n + 1][col(m + 1)] = true;
    }
    // even row n + 2 (channel 1) from the second sum rule at row n
    for (int m = -reach; m <= reach; m += 2) {
      if (m - 1 < -reach || m + 1 > reach) continue;
      if (!(known[n][col(m)] && known[n + 1][col(m + 1)] && known[n + 1][col(m - 1)])) continue;
      const mp_real src = (m == 0 && n == 0) ? 1 : 0;
      grid[n + 2][col(m)] =
          src - grid[n][col(m)] + grid[n + 1][col(m + 1)] + grid[n + 1][col(m - 1)];
      known[n + 2][col(m)] = true;
    }
  }

  DarkTable table(window, Provenance::Recurrence);
  for (int m = -window; m <= window; ++m)
    for (int n = -window; n <= window; ++n) {
      const int an = std::abs(n);
      const bool c1_site = is_even(m) && is_even(n);
      const bool c2_site = !is_even(m) && !is_even(n);
      if (!c1_site && !c2_site) continue;
      if (!known[an][col(std::abs(m))])
        throw Error(ErrorCode::InconsistentClosure, "march did not reach (m, n) in the window");
      table(c1_site ? 1 : 2, m, n) = static_cast<double>(grid[an][col(std::abs(m))]);
    }

  // Closure: exchange relations not used by the march.
  double worst = 0.0;
  for (int m = -window; m <= window; ++m)
    for (int n = -window; n <= window; ++n) {
      const double src = (m == 0 && n == 0) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(table(1, m, n) + table(1, n, m) - src));
      worst = std::max(worst, std::abs(table(2, m, n) - table(2, n, m)));
    }
  if (worst > 1e-10)
    throw Error(ErrorCode::InconsistentClosure, "exchange relations violated by " + std::to_string(worst));

  std::vector<cplx> iseq;
  for (const auto& v : jseq) iseq.emplace_back(0.0, static_cast<double>(v));
  table.set_I_sequence(std::move(iseq));
  return table;
}

enum class Sigma { eg, ge };

/// <D^sigma_mn | D^eg_00> = c_{1,m,n} (sigma = eg) or c_{2,m,n} (sigma = ge).
inline cplx dark_overlap(const DarkTable& table, int m, int n, Sigma sigma) {
  return table.at(sigma == Sigma::eg ? 1 : 2, m, n);
}

/// |D^sigma_mn>: the asymptotic dark state reached from |(e,m),(g,n)> (eg) or
/// |(g,m),(e,n)> (ge), assembled from the table by an index shift. Entries
/// beyond the table or the target window are dropped.
inline TwoAtomState asymptotic_dark_state(const DarkTable& table, int m, int n, Sigma sigma,
                                          int window) {
  TwoAtomState s(window);
  const int tw = table.window();
  for (int a = -tw; a <= tw; ++a)
    for (int b = -tw; b <= tw; ++b) {
      const int mm = m + a, nn = n + b;
      if (!s.contains(mm, nn)) continue;
      if (sigma == Sigma::eg) {
        s(Channel::ExcGnd, mm, nn) = table(1, a, b);
        s(Channel::GndExc, mm, nn) = table(2, a, b);
      } else {
        s(Channel::ExcGnd, mm, nn) = table(2, a, b);
        s(Channel::GndExc, mm, nn) = table(1, b, a);
      }
    }
  return s;
}

// ---------------------------------------------------------------------------
// Exact dark states of the full model
// ---------------------------------------------------------------------------

enum class DarkCase { PeriodicD1, PeriodicD2, TrapN };

struct ExactDarkState {
  DarkCase kind = DarkCase::PeriodicD1;
  double kinetic_energy = 0.0;  // units of w_rec
  double normalization = 1.0;   // factor applied to the printed closed form
  double trap_wavenumber = 0.0;  // N, trap case only
  TwoAtomState lattice;          // momentum components, periodic cases only

  /// Normalized coordinate-space amplitudes at (k x1, k x2).
  PointwiseTriple evaluate(double x1k, double x2k) const {
    const double c1 = std::cos(x1k), c2 = std::cos(x2k);
    double envelope = 1.0;
    if (kind != DarkCase::PeriodicD1) envelope = std::sin(x1k) * std::sin(x2k);
    const double f = normalization * envelope;
    return {f * c2, -f * c1, 0.0};
  }

  PositionField field(std::size_t grid) const {
    PositionField pf = kind == DarkCase::TrapN
                           ? PositionField(Boundary::Dirichlet, grid, trap_wavenumber)
                           : PositionField(Boundary::Periodic, grid);
    pf.fill([&](double x1, double x2) { return evaluate(x1, x2); });
    return pf;
  }
};

/// D1 = |d_{0,-1}> = (cos kx2, -cos kx1, 0) and
/// D2 = sin kx1 sin kx2 (cos kx2, -cos kx1, 0) = |d_{-1,0}> - |d_{1,0}> + |d_{1,-2}> - |d_{-1,-2}>
/// (the combination equals four times the closed form; both are normalized here).
inline std::vector<ExactDarkState> exact_dark_states_periodic(const Params& p, int window = 2) {
  if (p.q1 != 0.0 || p.q2 != 0.0)
    throw Error(ErrorCode::NoDarkState, "exact dark states need integer momenta (q1 = q2 = 0)");
  require_window(window);

  ExactDarkState d1;
  d1.kind = DarkCase::PeriodicD1;
  d1.kinetic_energy = 1.0;
  d1.normalization = 1.0;
  d1.lattice = dark_basis_state(0, -1).state(window);

  ExactDarkState d2;
  d2.kind = DarkCase::PeriodicD2;
  d2.kinetic_energy = 5.0;
  TwoAtomState combo(window);
  const std::array<std::pair<std::array<int, 2>, double>, 4> terms{
      {{{-1, 0}, 1.0}, {{1, 0}, -1.0}, {{1, -2}, 1.0}, {{-1, -2}, -1.0}}};
  for (const auto& [mn, sign] : terms)
    for (const auto& c : dark_basis_state(mn[0], mn[1]).components)
      combo(c.index.channel, c.index.m, c.index.n) += sign * c.weight;
  const double norm = std::sqrt(combo.norm2());  // sqrt(2)
  for (auto& a : combo.amps()) a /= norm;
  d2.lattice = std::move(combo);
  // closed form = combination / 4, so closed-form norm = sqrt(2) / 4
  d2.normalization = 4.0 / norm;
  return {std::move(d1), std::move(d2)};
}

/// Square-well case with k = N pi / L: one dark state when N is a positive
/// integer and the mode phase vanishes, sin kx1 sin kx2 (cos kx2, -cos kx1, 0).
inline ExactDarkState exact_dark_state_trap(double trap_wavenumber, double phi) {
  const bool integral = trap_wavenumber >= 1.0 &&
                        std::abs(trap_wavenumber - std::round(trap_wavenumber)) < 1e-12;
  if (!integral || phi != 0.0)
    throw Error(ErrorCode::NoDarkState, "trap dark state needs k = N pi / L with integer N and phi = 0");
  ExactDarkState t;
  t.kind = DarkCase::TrapN;
  t.trap_wavenumber = std::round(trap_wavenumber);
  t.kinetic_energy = 5.0;
  // integral over [0, N pi]^2 of the closed form squared is (N pi)^2 / 8
  t.normalization = 2.0 * std::sqrt(2.0) / (t.trap_wavenumber * pi);
  return t;
}

// ---------------------------------------------------------------------------
// Quasi-dark decay estimate and trap coupling chains
// ---------------------------------------------------------------------------

struct DecayEstimate {
  double gamma = 0.0;      // units of w_rec
  bool outside_validity = false;  // kappa' > 2 Omega: estimate not meaningful
};

/// Gamma ~ (m~^2 + n~^2)^2 kappa' / Omega^2, order of magnitude only.
inline DecayEstimate decay_rate_estimate(double m_typ, double n_typ, const Params& p) {
  const double k2 = m_typ * m_typ + n_typ * n_typ;
  return {k2 * k2 * p.kappa / (p.omega * p.omega), p.kappa > 2.0 * p.omega};
}

inline DecayEstimate decay_rate_estimate(const DarkBasisState& d, const Params& p) {
  const auto [mt, nt] = typical_indices(d);
  return decay_rate_estimate(mt, nt, p);
}

struct ChainLink {
  int from = 0;
  int to = 0;
  int sign = 1;
};

/// Square-well eigenfunctions psi_q coupled by cos(N pi x / L), listed left to right.
struct TrapChain {
  std::vector<int> nodes;
  std::vector<ChainLink> links;
};

/// For q < N: ... psi_{2N-q} - psi_{N-q} -(-)- psi_q - psi_{q+N} - psi_{q+2N} ...
/// truncated to `depth` nodes around psi_q (the extra node goes right when
/// depth is even). For q = N the chain is one-sided: psi_N - psi_2N - ...
/// When 2q = N the two sides coincide and the negative link is a self-coupling.
inline TrapChain trap_coupling_chain(int q, int n_wave, int depth) {
  if (n_wave < 1 || q < 1 || q > n_wave)
    throw Error(ErrorCode::InvalidQuantumNumber, "need 1 <= q <= N");
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
  TrapChain chain;
  if (q == n_wave || 2 * q == n_wave) {
    for (int j = 0; j < depth; ++j) chain.nodes.push_back(q + j * n_wave);
    if (2 * q == n_wave) chain.links.push_back({q, q, -1});
  } else {
    const int left = (depth - 1) / 2;
    const int right = depth - 1 - left;
    for (int j = left; j >= 1; --j) chain.nodes.push_back(j * n_wave - q);
    chain.nodes.push_back(q);
    for (int j = 1; j <= right; ++j) chain.nodes.push_back(q + j * n_wave);
  }
  for (std::size_t i = 0; i + 1 < chain.nodes.size(); ++i) {
    const int a = chain.nodes[i], b = chain.nodes[i + 1];
    chain.links.push_back({a, b, (a + b == n_wave) ? -1 : 1});
  }
  return chain;
}

}  // namespace darkcav
