#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "nqho/errors.hpp"
#include "nqho/grid.hpp"
#include "nqho/wave_field.hpp"

namespace nqho {

/// Discrete-spectrum mode of the linear trap limit, omega_n = 1 + 2n.
struct HermiteMode {
  int index;
  double omega;
};

inline HermiteMode hermite_mode(int n) {
  if (n < 0) throw ConfigError("mode index must be non-negative");
  return HermiteMode{n, 1.0 + 2.0 * n};
}

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence
/// H_{n+1} = 2x H_n - 2n H_{n-1}, with H_0 = 1, H_1 = 2x.
template <typename Scalar>
Scalar hermite(int n, Scalar x) {
  if (n < 0) throw ConfigError("hermite order must be non-negative");
  if (n == 0) return Scalar(1);
  Scalar prev = Scalar(1);
  Scalar cur = Scalar(2) * x;
  for (int m = 1; m < n; ++m) {
    const Scalar next = Scalar(2) * x * cur - Scalar(2 * m) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace detail {

// U_n(x) = (2^n n! sqrt(pi))^{-1/2} exp(-x^2/2) H_n(x)
template <typename Scalar>
Scalar mode_amplitude(int n, Scalar x) {
  Scalar norm = std::sqrt(std::numbers::pi_v<Scalar>);
  for (int m = 1; m <= n; ++m) norm *= Scalar(2 * m);
  return std::exp(-x * x / Scalar(2)) * hermite(n, x) / std::sqrt(norm);
}

}  // namespace detail

/// Trap eigenmode U_n sampled on the grid (real-valued, unit quadrature norm).
/// Rejects modes whose Gaussian tail is not negligible at the domain edge,
/// where the periodic wrap would corrupt them.
template <typename Scalar>
WaveField<Scalar> lqho_mode(int n, const GridSpec<Scalar>& grid) {
  if (n < 0) throw ConfigError("mode index must be non-negative");
  // 4e-14 admits n <= 10 on the L=20 domain and rejects n=11 (whose edge value
  // is 7.8e-14), where the wrap would start to leak into the 1e-10 norm budget.
  const Scalar edge = std::abs(detail::mode_amplitude(n, grid.length / Scalar(2)));
  if (!(edge < Scalar(4e-14))) {
    throw ConfigError("mode n=" + std::to_string(n) +
                      " does not vanish at the domain edge (|U_n(L/2)| = " +
                      std::to_string(edge) + "); enlarge L or lower n");
  }
  WaveField<Scalar> field = make_wave_field(grid);
  for (Eigen::Index j = 0; j < grid.node_count; ++j) {
    field.values[j] = detail::mode_amplitude(n, grid.nodes[j]);
  }
  return field;
}

/// U_n(x) exp(-i (1+2n) t), the stationary solution of the linear limit.
template <typename Scalar>
WaveField<Scalar> lqho_solution(int n, const GridSpec<Scalar>& grid, Scalar t) {
  WaveField<Scalar> field = lqho_mode(n, grid);
  const HermiteMode mode = hermite_mode(n);
  const std::complex<Scalar> phase = std::polar(Scalar(1), -Scalar(mode.omega) * t);
  field.values *= phase;
  field.time = t;
  return field;
}

/// A exp(i(kx + (sigma A^2 - k^2) t)), the exact constant-potential plane wave
/// (alpha = 0, gamma = 0). k must be a grid wavenumber or the field would alias.
template <typename Scalar>
WaveField<Scalar> plane_wave_solution(Scalar amplitude, Scalar k, Scalar sigma, Scalar t,
                                      const GridSpec<Scalar>& grid) {
  const Scalar k0 = grid.fundamental_wavenumber();
  const Scalar harmonic = k / k0;
  const Scalar rounded = std::round(harmonic);
  if (std::abs(harmonic - rounded) > Scalar(1e-9) ||
      std::abs(rounded) > Scalar(grid.node_count / 2)) {
    throw ConfigError("k = " + std::to_string(k) +
                      " is not a wavenumber of this grid");
  }
  WaveField<Scalar> field = make_wave_field(grid);
  const Scalar omega_phase = (sigma * amplitude * amplitude - k * k) * t;
  for (Eigen::Index j = 0; j < grid.node_count; ++j) {
    field.values[j] = std::polar(amplitude, k * grid.nodes[j] + omega_phase);
  }
  field.time = t;
  return field;
}

/// Squared-L2-norm decay law: norm0 * exp(-2 gamma t). Amplitudes decay as
/// exp(-gamma t).
template <typename Scalar>
Scalar decayed_squared_norm(Scalar norm0, Scalar gamma, Scalar t) {
  if (norm0 < Scalar(0)) throw ConfigError("squared norm must be non-negative");
  if (gamma < Scalar(0)) throw ConfigError("gamma must be non-negative");
  return norm0 * std::exp(Scalar(-2) * gamma * t);
}

}  // namespace nqho
