#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <string>

#include "nqho/errors.hpp"
#include "nqho/grid.hpp"

namespace nqho {

/// Complex field samples psi(x_j) on a grid at one instant of time.
template <typename Scalar = double>
struct WaveField {
  GridSpec<Scalar> grid;
  Eigen::VectorX<std::complex<Scalar>> values;
  Scalar time{};
};

template <typename Scalar>
WaveField<Scalar> make_wave_field(const GridSpec<Scalar>& grid) {
  WaveField<Scalar> field;
  field.grid = grid;
  field.values = Eigen::VectorX<std::complex<Scalar>>::Zero(grid.node_count);
  field.time = Scalar(0);
  return field;
}

template <typename Scalar>
bool all_finite(const Eigen::VectorX<std::complex<Scalar>>& values) {
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag())) {
      return false;
    }
  }
  return true;
}

template <typename Scalar>
void check_field(const WaveField<Scalar>& field) {
  if (field.values.size() != field.grid.node_count) {
    throw ConfigError("field has " + std::to_string(field.values.size()) +
                      " values on a grid of " + std::to_string(field.grid.node_count) +
                      " nodes");
  }
  if (!all_finite<Scalar>(field.values)) {
    throw NumericalError("field contains NaN/Inf at t=" + std::to_string(field.time));
  }
}

/// Discrete L2 norm squared, sum |psi_j|^2 dx.
template <typename Scalar>
Scalar squared_norm(const WaveField<Scalar>& field) {
  return field.values.squaredNorm() * field.grid.spacing();
}

template <typename Scalar>
Scalar max_abs(const WaveField<Scalar>& field) {
  Scalar m(0);
  for (Eigen::Index j = 0; j < field.values.size(); ++j) {
    m = std::max(m, std::abs(field.values[j]));
  }
  return m;
}

/// Max over nodes of |a_j - b_j|; fields must share a grid.
template <typename Scalar>
Scalar max_pointwise_difference(const WaveField<Scalar>& a, const WaveField<Scalar>& b) {
  if (!same_grid(a.grid, b.grid)) throw ConfigError("fields live on different grids");
  Scalar m(0);
  for (Eigen::Index j = 0; j < a.values.size(); ++j) {
    m = std::max(m, std::abs(a.values[j] - b.values[j]));
  }
  return m;
}

/// Discrete L2 distance, sqrt(sum |a_j - b_j|^2 dx).
template <typename Scalar>
Scalar l2_distance(const WaveField<Scalar>& a, const WaveField<Scalar>& b) {
  if (!same_grid(a.grid, b.grid)) throw ConfigError("fields live on different grids");
  return std::sqrt((a.values - b.values).squaredNorm() * a.grid.spacing());
}

}  // namespace nqho
