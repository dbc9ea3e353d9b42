#pragma once

#include <Eigen/Core>
#include <complex>
#include <unsupported/Eigen/FFT>

#include "nqho/wave_field.hpp"

namespace nqho {

namespace detail {

// One plan cache per thread; kissfft plans depend only on the transform size,
// so results are identical across threads.
template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  thread_local Eigen::FFT<Scalar> engine;
  return engine;
}

}  // namespace detail

/// Unnormalized forward DFT: c_n = sum_j psi_j exp(-i 2 pi n j / N).
template <typename Scalar>
Eigen::VectorX<std::complex<Scalar>> forward_transform(const WaveField<Scalar>& field) {
  check_field(field);
  Eigen::VectorX<std::complex<Scalar>> spectrum;
  detail::fft_engine<Scalar>().fwd(spectrum, field.values);
  return spectrum;
}

/// Exact inverse of forward_transform, including the 1/N factor.
template <typename Scalar>
Eigen::VectorX<std::complex<Scalar>> inverse_transform(
    const Eigen::VectorX<std::complex<Scalar>>& spectrum) {
  Eigen::VectorX<std::complex<Scalar>> values;
  detail::fft_engine<Scalar>().inv(values, spectrum);
  return values;
}

/// F^-1[ -k^2 F[psi] ] on the field's grid.
template <typename Scalar>
Eigen::VectorX<std::complex<Scalar>> spectral_second_derivative(
    const WaveField<Scalar>& field) {
  Eigen::VectorX<std::complex<Scalar>> spectrum = forward_transform(field);
  for (Eigen::Index n = 0; n < spectrum.size(); ++n) {
    const Scalar k = field.grid.wavenumbers[n];
    spectrum[n] *= -k * k;
  }
  return inverse_transform(spectrum);
}

}  // namespace nqho
