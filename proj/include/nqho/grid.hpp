#pragma once

#include <Eigen/Core>
#include <numbers>
#include <string>

#include "nqho/errors.hpp"

namespace nqho {

/// Uniform periodic grid on [-L/2, L/2) with wavenumbers in FFT transform
/// ordering: k_n = 2*pi*n/L for n = 0..N/2-1, -N/2..-1. The Nyquist mode
/// carries the negative branch -pi*N/L.
template <typename Scalar = double>
struct GridSpec {
  Scalar length{};
  Eigen::Index node_count{};
  Eigen::VectorX<Scalar> nodes;
  Eigen::VectorX<Scalar> wavenumbers;

  Scalar spacing() const { return length / static_cast<Scalar>(node_count); }
  Scalar fundamental_wavenumber() const {
    return Scalar(2) * std::numbers::pi_v<Scalar> / length;
  }
  Scalar max_wavenumber() const {
    return std::numbers::pi_v<Scalar> * static_cast<Scalar>(node_count) / length;
  }
};

template <typename Scalar>
GridSpec<Scalar> make_grid(Scalar length, Eigen::Index node_count) {
  if (!(length > Scalar(0))) {
    throw ConfigError("grid length must be positive, got " + std::to_string(length));
  }
  if (node_count < 2 || node_count % 2 != 0) {
    throw ConfigError("grid node count must be even and >= 2, got " +
                      std::to_string(node_count));
  }
  GridSpec<Scalar> grid;
  grid.length = length;
  grid.node_count = node_count;
  grid.nodes.resize(node_count);
  grid.wavenumbers.resize(node_count);
  const Scalar dx = grid.spacing();
  const Scalar k0 = grid.fundamental_wavenumber();
  for (Eigen::Index j = 0; j < node_count; ++j) {
    grid.nodes[j] = -length / Scalar(2) + static_cast<Scalar>(j) * dx;
    const Eigen::Index n = (j < node_count / 2) ? j : j - node_count;
    grid.wavenumbers[j] = k0 * static_cast<Scalar>(n);
  }
  return grid;
}

template <typename Scalar>
bool same_grid(const GridSpec<Scalar>& a, const GridSpec<Scalar>& b) {
  return a.length == b.length && a.node_count == b.node_count;
}

}  // namespace nqho
