#pragma once

#include <cmath>
#include <vector>

#include "darkcav/dark.hpp"
#include "darkcav/fft.hpp"

namespace darkcav {

namespace detail {
/// f_i / (cos^2 xi1 + cos^2 xi2) with f_1 = cos^2 xi2, f_2 = -cos xi1 cos xi2.
inline double dark_integrand(int channel, double c1, double c2) {
  const double den = c1 * c1 + c2 * c2;
  return channel == 1 ? c2 * c2 / den : -c1 * c2 / den;
}

inline void require_quadrature_grid(std::size_t gq) {
  if (gq < 256) throw Error(ErrorCode::InvalidArgument, "quadrature grid must be >= 256");
  if (gq % 4 != 0) throw Error(ErrorCode::InvalidArgument, "quadrature grid must be divisible by 4");
}
}  // namespace detail

/// Midpoint-rule value of
///   c_{i,m,n} = (2 pi)^-2 \int\int exp(-i (m xi1 + n xi2)) f_i / (cos^2 xi1 + cos^2 xi2).
/// Nodes sit at xi_j = (j + 1/2) 2 pi / G_q; with G_q divisible by 4 the four
/// points where both cosines vanish lie on cell corners, symmetric about the grid.
inline cplx quadrature_c(int channel, int m, int n, std::size_t gq) {
  detail::require_quadrature_grid(gq);
  if (channel != 1 && channel != 2) throw Error(ErrorCode::InvalidArgument, "channel must be 1 or 2");
  const double h = 2 * pi / static_cast<double>(gq);
  std::vector<double> cosv(gq);
  std::vector<cplx> em(gq), en(gq);
  for (std::size_t j = 0; j < gq; ++j) {
    const double x = (static_cast<double>(j) + 0.5) * h;
    cosv[j] = std::cos(x);
    em[j] = std::exp(-I * (m * x));
    en[j] = std::exp(-I * (n * x));
  }
  cplx total = 0.0;
  for (std::size_t i = 0; i < gq; ++i) {
    cplx row = 0.0;
    for (std::size_t j = 0; j < gq; ++j) row += en[j] * detail::dark_integrand(channel, cosv[i], cosv[j]);
    total += em[i] * row;
  }
  return total / static_cast<double>(gq * gq);
}

/// Whole table on |m|,|n| <= window by one 2-D DFT per channel.
inline DarkTable quadrature_table(int window, std::size_t gq) {
  detail::require_quadrature_grid(gq);
  if (2 * static_cast<std::size_t>(window) >= gq)
    throw Error(ErrorCode::InvalidArgument, "window too large for the quadrature grid");
  const double h = 2 * pi / static_cast<double>(gq);
  const fft::Dft2d dft(gq);
  DarkTable table(window, Provenance::Quadrature);
  std::vector<double> cosv(gq);
  for (std::size_t j = 0; j < gq; ++j) cosv[j] = std::cos((static_cast<double>(j) + 0.5) * h);
  for (int ch = 1; ch <= 2; ++ch) {
    std::vector<cplx> data(gq * gq);
    for (std::size_t i = 0; i < gq; ++i)
      for (std::size_t j = 0; j < gq; ++j) data[i * gq + j] = detail::dark_integrand(ch, cosv[i], cosv[j]);
    dft.forward(data);
    const int g = static_cast<int>(gq);
    for (int m = -window; m <= window; ++m)
      for (int n = -window; n <= window; ++n) {
        const auto i = static_cast<std::size_t>((m + g) % g);
        const auto j = static_cast<std::size_t>((n + g) % g);
        table(ch, m, n) = data[i * gq + j] * std::exp(-I * (0.5 * h * (m + n))) /
                          static_cast<double>(gq * gq);
      }
  }
  return table;
}

}  // namespace darkcav
