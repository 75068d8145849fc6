#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "darkcav/params.hpp"

namespace darkcav {

enum class Boundary : int { Periodic = 0, Dirichlet = 1 };

struct PointwiseTriple {
  cplx a1{}, a2{}, a3{};
  friend bool operator==(const PointwiseTriple&, const PointwiseTriple&) = default;
};

/// Coordinate representation of the three channel amplitudes on a G x G grid.
/// Coordinates are the phases xi = k x.
///   Periodic:  xi_j = (j + 1/2) 2 pi / G, the periodic part of C (quasi-momentum
///              factored out); half-cell offset keeps samples off the mode nodes.
///   Dirichlet: xi_j = (j + 1) L / (G + 1) with L = N pi, interior points only.
/// Storage is row-major with the first index along xi_1.
class PositionField {
 public:
  PositionField() = default;
  PositionField(Boundary boundary, std::size_t grid, double trap_wavenumber = 1.0,
                double phi = 0.0, double time = 0.0)
      : boundary_(boundary), grid_(grid), trap_n_(trap_wavenumber), phi_(phi), time_(time) {
    if (grid < 4) throw Error(ErrorCode::InvalidArgument, "grid size must be >= 4");
    if (boundary == Boundary::Dirichlet && !(trap_wavenumber > 0))
      throw Error(ErrorCode::InvalidArgument, "trap wavenumber N must be > 0");
    for (auto& c : data_) c.assign(grid * grid, cplx{});
  }

  Boundary boundary() const { return boundary_; }
  std::size_t grid() const { return grid_; }
  /// N in k = N pi / L (Dirichlet only).
  double trap_wavenumber() const { return trap_n_; }
  /// Domain length in units of 1/k.
  double length() const { return boundary_ == Boundary::Periodic ? 2 * pi : trap_n_ * pi; }
  double phi() const { return phi_; }
  void set_phi(double phi) { phi_ = phi; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  double spacing() const {
    return boundary_ == Boundary::Periodic ? length() / static_cast<double>(grid_)
                                           : length() / static_cast<double>(grid_ + 1);
  }
  double coordinate(std::size_t j) const {
    return boundary_ == Boundary::Periodic ? (static_cast<double>(j) + 0.5) * spacing()
                                           : (static_cast<double>(j) + 1.0) * spacing();
  }

  std::vector<cplx>& channel(int c) { return data_[c - 1]; }
  const std::vector<cplx>& channel(int c) const { return data_[c - 1]; }

  cplx& operator()(int c, std::size_t i, std::size_t j) { return data_[c - 1][i * grid_ + j]; }
  const cplx& operator()(int c, std::size_t i, std::size_t j) const {
    return data_[c - 1][i * grid_ + j];
  }

  /// Quadrature weight per point: the mean over the cell for periodic fields
  /// (so plane waves have unit norm), the area element h^2 for Dirichlet fields.
  double weight() const {
    return boundary_ == Boundary::Periodic ? 1.0 / static_cast<double>(grid_ * grid_)
                                           : spacing() * spacing();
  }

  double channel_norm2(int c) const {
    double s = 0.0;
    for (const auto& v : data_[c - 1]) s += std::norm(v);
    return s * weight();
  }
  double norm2() const { return channel_norm2(1) + channel_norm2(2) + channel_norm2(3); }

  void scale(cplx f) {
    for (auto& c : data_)
      for (auto& v : c) v *= f;
  }
  void normalize() {
    const double n = std::sqrt(norm2());
    if (n > 0) scale(1.0 / n);
  }

  template <class F>
  void fill(F&& f) {
    for (std::size_t i = 0; i < grid_; ++i)
      for (std::size_t j = 0; j < grid_; ++j) {
        const PointwiseTriple t = f(coordinate(i), coordinate(j));
        data_[0][i * grid_ + j] = t.a1;
        data_[1][i * grid_ + j] = t.a2;
        data_[2][i * grid_ + j] = t.a3;
      }
  }

 private:
  Boundary boundary_ = Boundary::Periodic;
  std::size_t grid_ = 0;
  double trap_n_ = 1.0;
  double phi_ = 0.0;
  double time_ = 0.0;
  std::array<std::vector<cplx>, 3> data_;
};

}  // namespace darkcav
