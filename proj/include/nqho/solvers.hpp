#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <string>
#include <type_traits>

#include "nqho/fourier.hpp"
#include "nqho/params.hpp"
#include "nqho/wave_field.hpp"

namespace nqho {

enum class Stepper { ssfm, rk4 };

inline const char* stepper_name(Stepper s) { return s == Stepper::ssfm ? "ssfm" : "rk4"; }

template <typename Scalar>
using FieldObserver = std::function<void(const WaveField<Scalar>&)>;

namespace detail {

// Phase accumulated from the trap over one step, -alpha x_j^2 dt.
template <typename Scalar>
Eigen::VectorX<Scalar> trap_phase_per_step(const GridSpec<Scalar>& grid, Scalar alpha,
                                           Scalar dt) {
  Eigen::VectorX<Scalar> phase(grid.node_count);
  for (Eigen::Index j = 0; j < grid.node_count; ++j) {
    phase[j] = -alpha * grid.nodes[j] * grid.nodes[j] * dt;
  }
  return phase;
}

// exp(-i k_n^2 dt), one unit-modulus factor per spectral mode.
template <typename Scalar>
Eigen::VectorX<std::complex<Scalar>> dispersion_factors(const GridSpec<Scalar>& grid,
                                                        Scalar dt) {
  Eigen::VectorX<std::complex<Scalar>> factors(grid.node_count);
  for (Eigen::Index n = 0; n < grid.node_count; ++n) {
    const Scalar k = grid.wavenumbers[n];
    factors[n] = std::polar(Scalar(1), -k * k * dt);
  }
  return factors;
}

// psi_j <- exp(i((-alpha x_j^2 + sigma |psi_j|^2) dt)) * exp(-gamma dt) * psi_j
// with |psi_j|^2 frozen at the start-of-step value.
template <typename Scalar>
void apply_nonlinear(Eigen::VectorX<std::complex<Scalar>>& values,
                     const Eigen::VectorX<Scalar>& trap_phase, Scalar sigma_dt,
                     Scalar decay) {
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const Scalar phase = trap_phase[j] + sigma_dt * std::norm(values[j]);
    values[j] *= std::polar(decay, phase);
  }
}

template <typename Scalar>
void apply_dispersion(Eigen::VectorX<std::complex<Scalar>>& values,
                      const Eigen::VectorX<std::complex<Scalar>>& factors,
                      Eigen::VectorX<std::complex<Scalar>>& spectrum) {
  auto& fft = fft_engine<Scalar>();
  fft.fwd(spectrum, values);
  spectrum.array() *= factors.array();
  fft.inv(values, spectrum);
}

template <typename Scalar>
struct RhsWorkspace {
  Eigen::VectorX<Scalar> x_sq;
  Eigen::VectorX<Scalar> k_sq;
  Eigen::VectorX<std::complex<Scalar>> spectrum;

  explicit RhsWorkspace(const GridSpec<Scalar>& grid)
      : x_sq(grid.nodes.array().square()),
        k_sq(grid.wavenumbers.array().square()),
        spectrum(grid.node_count) {}
};

// psi_t = i (psi_xx - alpha x^2 psi + sigma |psi|^2 psi) - gamma psi
template <typename Scalar>
void eval_rhs(const Eigen::VectorX<std::complex<Scalar>>& in,
              Eigen::VectorX<std::complex<Scalar>>& out, RhsWorkspace<Scalar>& ws,
              const NqhoParams<Scalar>& params) {
  auto& fft = fft_engine<Scalar>();
  fft.fwd(ws.spectrum, in);
  for (Eigen::Index n = 0; n < ws.spectrum.size(); ++n) ws.spectrum[n] *= -ws.k_sq[n];
  fft.inv(out, ws.spectrum);
  const std::complex<Scalar> i_unit(0, 1);
  for (Eigen::Index j = 0; j < in.size(); ++j) {
    const Scalar potential = params.sigma * std::norm(in[j]) - params.alpha * ws.x_sq[j];
    out[j] = i_unit * (out[j] + potential * in[j]) - params.gamma * in[j];
  }
}

template <typename Scalar>
struct Rk4Workspace {
  RhsWorkspace<Scalar> rhs;
  Eigen::VectorX<std::complex<Scalar>> k1, k2, k3, k4, stage;

  explicit Rk4Workspace(const GridSpec<Scalar>& grid)
      : rhs(grid),
        k1(grid.node_count),
        k2(grid.node_count),
        k3(grid.node_count),
        k4(grid.node_count),
        stage(grid.node_count) {}
};

template <typename Scalar>
void rk4_advance(Eigen::VectorX<std::complex<Scalar>>& values,
                 const NqhoParams<Scalar>& params, Rk4Workspace<Scalar>& ws) {
  const Scalar dt = params.dt;
  eval_rhs(values, ws.k1, ws.rhs, params);
  ws.stage = values + (dt / Scalar(2)) * ws.k1;
  eval_rhs(ws.stage, ws.k2, ws.rhs, params);
  ws.stage = values + (dt / Scalar(2)) * ws.k2;
  eval_rhs(ws.stage, ws.k3, ws.rhs, params);
  ws.stage = values + dt * ws.k3;
  eval_rhs(ws.stage, ws.k4, ws.rhs, params);
  values += (dt / Scalar(6)) * (ws.k1 + Scalar(2) * ws.k2 + Scalar(2) * ws.k3 + ws.k4);
}

}  // namespace detail

/// Exact pointwise solution of the nonlinear/dissipative part over one step:
/// the modulus scales by exp(-gamma dt) and the phase advances by
/// (-alpha x^2 + sigma |psi|^2) dt. Advances field.time by dt.
template <typename Scalar>
WaveField<Scalar> nonlinear_substep(WaveField<Scalar> field,
                                    const NqhoParams<Scalar>& params) {
  check_field(field);
  params.validate();
  const auto trap = detail::trap_phase_per_step(field.grid, params.alpha, params.dt);
  const Scalar decay = std::exp(-params.gamma * params.dt);
  detail::apply_nonlinear(field.values, trap, params.sigma * params.dt, decay);
  field.time += params.dt;
  if (!all_finite<Scalar>(field.values)) {
    throw NumericalError("nonlinear substep produced NaN/Inf at t=" +
                         std::to_string(field.time));
  }
  return field;
}

/// Dispersion over one step, F^-1[exp(-i k^2 dt) F[psi]]. Every Fourier
/// modulus is preserved. Does not advance time (the composed step does).
template <typename Scalar>
WaveField<Scalar> linear_substep(WaveField<Scalar> field,
                                 const NqhoParams<Scalar>& params) {
  check_field(field);
  params.validate();
  const auto factors = detail::dispersion_factors(field.grid, params.dt);
  Eigen::VectorX<std::complex<Scalar>> spectrum(field.grid.node_count);
  detail::apply_dispersion(field.values, factors, spectrum);
  return field;
}

/// One split step: nonlinear substep first, then the linear substep.
template <typename Scalar>
WaveField<Scalar> ssfm_step(WaveField<Scalar> field, const NqhoParams<Scalar>& params) {
  return linear_substep(nonlinear_substep(std::move(field), params), params);
}

/// Time derivative of the field under the full model, evaluated spectrally.
template <typename Scalar>
Eigen::VectorX<std::complex<Scalar>> nqho_rhs(const WaveField<Scalar>& field,
                                              const NqhoParams<Scalar>& params) {
  check_field(field);
  params.validate();
  detail::RhsWorkspace<Scalar> ws(field.grid);
  Eigen::VectorX<std::complex<Scalar>> out(field.grid.node_count);
  detail::eval_rhs(field.values, out, ws, params);
  return out;
}

/// Classical four-stage RK4 update of nqho_rhs. Advances field.time by dt.
template <typename Scalar>
WaveField<Scalar> rk4_step(WaveField<Scalar> field, const NqhoParams<Scalar>& params) {
  check_field(field);
  params.validate();
  require_rk4_stable(params, field.grid);
  detail::Rk4Workspace<Scalar> ws(field.grid);
  detail::rk4_advance(field.values, params, ws);
  field.time += params.dt;
  if (!all_finite<Scalar>(field.values)) {
    throw NumericalError("rk4 step produced NaN/Inf at t=" + std::to_string(field.time));
  }
  return field;
}

/// Advances the field to t_end in round((t_end - t0)/dt) steps. The observer,
/// when set, sees the state at every step index s with s % observer_stride == 0,
/// including the initial state (s = 0).
template <typename Scalar>
WaveField<Scalar> integrate(WaveField<Scalar> field, const NqhoParams<Scalar>& params,
                            std::type_identity_t<Scalar> t_end, Stepper stepper,
                            const std::type_identity_t<FieldObserver<Scalar>>& observer = {},
                            Eigen::Index observer_stride = 1) {
  check_field(field);
  params.validate();
  if (observer_stride < 1) throw ConfigError("observer stride must be >= 1");
  if (t_end < field.time) {
    throw ConfigError("t_end " + std::to_string(t_end) + " is before field time " +
                      std::to_string(field.time));
  }
  const Scalar t0 = field.time;
  const long long steps = std::llround((t_end - t0) / params.dt);
  if (std::abs(t0 + static_cast<Scalar>(steps) * params.dt - t_end) > Scalar(1e-12)) {
    std::cerr << "warning: t_end " << t_end << " is not a multiple of dt; integrating "
              << steps << " steps to t=" << t0 + static_cast<Scalar>(steps) * params.dt
              << "\n";
  }
  if (observer) observer(field);
  if (steps == 0) return field;

  if (stepper == Stepper::ssfm) {
    const auto trap = detail::trap_phase_per_step(field.grid, params.alpha, params.dt);
    const auto factors = detail::dispersion_factors(field.grid, params.dt);
    const Scalar decay = std::exp(-params.gamma * params.dt);
    const Scalar sigma_dt = params.sigma * params.dt;
    Eigen::VectorX<std::complex<Scalar>> spectrum(field.grid.node_count);
    for (long long s = 1; s <= steps; ++s) {
      detail::apply_nonlinear(field.values, trap, sigma_dt, decay);
      detail::apply_dispersion(field.values, factors, spectrum);
      field.time = t0 + static_cast<Scalar>(s) * params.dt;
      if (!all_finite<Scalar>(field.values)) {
        throw NumericalError("NaN/Inf detected at step " + std::to_string(s) + " (t=" +
                             std::to_string(field.time) + ")");
      }
      if (observer && s % observer_stride == 0) observer(field);
    }
  } else {
    require_rk4_stable(params, field.grid);
    detail::Rk4Workspace<Scalar> ws(field.grid);
    for (long long s = 1; s <= steps; ++s) {
      detail::rk4_advance(field.values, params, ws);
      field.time = t0 + static_cast<Scalar>(s) * params.dt;
      if (!all_finite<Scalar>(field.values)) {
        throw NumericalError("NaN/Inf detected at step " + std::to_string(s) + " (t=" +
                             std::to_string(field.time) + ")");
      }
      if (observer && s % observer_stride == 0) observer(field);
    }
  }
  return field;
}

}  // namespace nqho
