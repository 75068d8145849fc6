#pragma once

#include <cstddef>
#include <cstdlib>
#include <span>
#include <vector>

#include "darkcav/params.hpp"

namespace darkcav {

/// The three single-excitation configurations of the two-atom system.
enum class Channel : int { ExcGnd = 1, GndExc = 2, Photon = 3 };

struct LatticeIndex {
  Channel channel = Channel::ExcGnd;
  int m = 0;
  int n = 0;
};

enum class ParityClass { A, B };

inline bool is_even(int v) { return (v % 2) == 0; }

/// Class A is the sector reached from (1, even, even): channel 1 with m,n even,
/// channel 2 with m,n odd, channel 3 with m odd and n even. Everything else is B.
inline ParityClass parity_class(const LatticeIndex& idx) {
  switch (idx.channel) {
    case Channel::ExcGnd:
      return (is_even(idx.m) && is_even(idx.n)) ? ParityClass::A : ParityClass::B;
    case Channel::GndExc:
      return (!is_even(idx.m) && !is_even(idx.n)) ? ParityClass::A : ParityClass::B;
    case Channel::Photon:
      return (!is_even(idx.m) && is_even(idx.n)) ? ParityClass::A : ParityClass::B;
  }
  return ParityClass::B;
}

inline void require_window(int window, int minimum = 2) {
  if (window < minimum) {
    throw Error(ErrorCode::WindowTooSmall,
                "window half-width " + std::to_string(window) + " < " + std::to_string(minimum));
  }
}

/// Amplitudes C_{i,m,n} on the square window |m|,|n| <= window.
/// Layout is channel-major, then m, then n (row-major in the momentum plane).
class TwoAtomState {
 public:
  static constexpr int channels = 3;

  TwoAtomState() = default;
  explicit TwoAtomState(int window, double time = 0.0)
      : window_(window), dim_(2 * window + 1), time_(time),
        amps_(static_cast<std::size_t>(channels) * dim_ * dim_) {
    require_window(window);
  }

  int window() const { return window_; }
  int dim() const { return dim_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  bool contains(int m, int n) const { return std::abs(m) <= window_ && std::abs(n) <= window_; }

  std::size_t offset(Channel c, int m, int n) const {
    return (static_cast<std::size_t>(static_cast<int>(c) - 1) * dim_ + (m + window_)) * dim_ +
           (n + window_);
  }

  cplx& operator()(Channel c, int m, int n) { return amps_[offset(c, m, n)]; }
  const cplx& operator()(Channel c, int m, int n) const { return amps_[offset(c, m, n)]; }

  /// Zero outside the window.
  cplx at(Channel c, int m, int n) const { return contains(m, n) ? (*this)(c, m, n) : cplx{}; }

  std::span<cplx> amps() { return amps_; }
  std::span<const cplx> amps() const { return amps_; }
  std::vector<cplx>& storage() { return amps_; }
  const std::vector<cplx>& storage() const { return amps_; }

  double norm2() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  friend bool operator==(const TwoAtomState&, const TwoAtomState&) = default;

 private:
  int window_ = 0;
  int dim_ = 0;
  double time_ = 0.0;
  std::vector<cplx> amps_;
};

/// Amplitudes C_{1,m} (excited) and C_{2,m} (ground, photon present).
class OneAtomState {
 public:
  static constexpr int channels = 2;

  OneAtomState() = default;
  explicit OneAtomState(int window, double time = 0.0)
      : window_(window), dim_(2 * window + 1), time_(time),
        amps_(static_cast<std::size_t>(channels) * dim_) {
    require_window(window);
  }

  int window() const { return window_; }
  int dim() const { return dim_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  bool contains(int m) const { return std::abs(m) <= window_; }
  std::size_t offset(int channel, int m) const {
    return static_cast<std::size_t>(channel - 1) * dim_ + (m + window_);
  }

  cplx& operator()(int channel, int m) { return amps_[offset(channel, m)]; }
  const cplx& operator()(int channel, int m) const { return amps_[offset(channel, m)]; }
  cplx at(int channel, int m) const { return contains(m) ? (*this)(channel, m) : cplx{}; }

  std::span<cplx> amps() { return amps_; }
  std::span<const cplx> amps() const { return amps_; }
  std::vector<cplx>& storage() { return amps_; }
  const std::vector<cplx>& storage() const { return amps_; }

  double norm2() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  friend bool operator==(const OneAtomState&, const OneAtomState&) = default;

 private:
  int window_ = 0;
  int dim_ = 0;
  double time_ = 0.0;
  std::vector<cplx> amps_;
};

/// Atom 1 excited, both atoms at rest, cavity empty.
inline TwoAtomState delta_initial_state(int window) {
  TwoAtomState s(window);
  s(Channel::ExcGnd, 0, 0) = 1.0;
  return s;
}

inline OneAtomState one_atom_excited_state(int window) {
  OneAtomState s(window);
  s(1, 0) = 1.0;
  return s;
}

/// Visits every index of the window in storage order.
template <class F>
void for_each_index(const TwoAtomState& s, F&& f) {
  const int w = s.window();
  for (int c = 1; c <= 3; ++c)
    for (int m = -w; m <= w; ++m)
      for (int n = -w; n <= w; ++n) f(LatticeIndex{static_cast<Channel>(c), m, n});
}

}  // namespace darkcav
