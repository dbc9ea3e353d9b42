#pragma once

namespace nqho {

inline constexpr const char* kVersion = "0.1.0";

/// Noise generator identity recorded in every run manifest: mt19937_64 drawn as
/// 53-bit mantissa uniforms u in [0,1), mapped to 2u-1 in [-1,1).
inline constexpr const char* kPrngAlgorithm = "mt19937_64-u53-bipolar";

}  // namespace nqho
