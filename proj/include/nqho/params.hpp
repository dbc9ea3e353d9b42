#pragma once

#include <string>

#include "nqho/errors.hpp"
#include "nqho/grid.hpp"

namespace nqho {

/// Model constants of i psi_t + psi_xx - alpha x^2 psi + sigma |psi|^2 psi
/// + i gamma psi = 0, plus the fixed integration step.
template <typename Scalar = double>
struct NqhoParams {
  Scalar alpha{1};   // trap strength, >= 0
  Scalar sigma{1};   // cubic nonlinearity
  Scalar gamma{0};   // linear dissipation, >= 0
  Scalar dt{5e-5};   // time step, > 0

  void validate() const {
    if (!(dt > Scalar(0))) throw ConfigError("dt must be positive");
    if (gamma < Scalar(0)) throw ConfigError("gamma must be non-negative");
    if (alpha < Scalar(0)) throw ConfigError("alpha must be non-negative");
  }
};

// Imaginary-axis stability bound for the classical RK4 stage polynomial,
// applied to the stiffest dispersion eigenvalue -i k_max^2.
inline constexpr double kRk4StabilityLimit = 2.8;

template <typename Scalar>
bool rk4_stable(const NqhoParams<Scalar>& params, const GridSpec<Scalar>& grid) {
  const Scalar kmax = grid.max_wavenumber();
  return kmax * kmax * params.dt < Scalar(kRk4StabilityLimit);
}

template <typename Scalar>
void require_rk4_stable(const NqhoParams<Scalar>& params, const GridSpec<Scalar>& grid) {
  if (!rk4_stable(params, grid)) {
    const Scalar kmax = grid.max_wavenumber();
    throw ConfigError("rk4 stability guard violated: (pi*N/L)^2 * dt = " +
                      std::to_string(kmax * kmax * params.dt) + " >= " +
                      std::to_string(kRk4StabilityLimit));
  }
}

}  // namespace nqho
