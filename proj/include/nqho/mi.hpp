#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "nqho/errors.hpp"
#include "nqho/params.hpp"
#include "nqho/solvers.hpp"
#include "nqho/stats.hpp"
#include "nqho/wave_field.hpp"

namespace nqho {

/// Noisy-carrier ensemble configuration: psi_0 = exp(i m k0 x) + beta a(x)
/// integrated with the split-step scheme, |psi| sampled every sample_stride
/// steps once t reaches t_adjust.
template <typename Scalar = double>
struct MiConfig {
  int m = 16;
  Scalar beta = Scalar(0.4);
  GridSpec<Scalar> grid;
  NqhoParams<Scalar> params;
  Scalar t_adjust = Scalar(10);
  Scalar t_end = Scalar(20);
  Eigen::Index sample_stride = 2000;
  int members = 1;
  std::uint64_t seed_base = 0;

  void validate() const {
    params.validate();
    if (grid.node_count < 2) throw ConfigError("ensemble grid is not initialized");
    if (std::abs(m) >= grid.node_count / 2) {
      throw ConfigError("carrier harmonic m=" + std::to_string(m) +
                        " aliases on a grid of " + std::to_string(grid.node_count) +
                        " nodes");
    }
    if (beta < Scalar(0)) throw ConfigError("perturbation amplitude must be >= 0");
    // t_end == t_adjust is the boundary case: a single snapshot, no recording
    // window.
    if (!(t_end >= t_adjust)) throw ConfigError("t_end must not precede t_adjust");
    if (t_adjust < Scalar(0)) throw ConfigError("t_adjust must be >= 0");
    if (sample_stride < 1) throw ConfigError("sample stride must be >= 1");
    if (members < 1) throw ConfigError("ensemble needs at least one member");
  }

  /// Snapshots a member records: one at t_adjust, then every stride until t_end.
  long long snapshots_per_member() const {
    const long long window = std::llround((t_end - t_adjust) / params.dt);
    return window / sample_stride + 1;
  }
};

/// |psi| samples collected from one ensemble member.
template <typename Scalar = double>
struct SampleSet {
  std::vector<Scalar> amplitudes;
  std::uint64_t member_seed = 0;

  std::int64_t count() const { return static_cast<std::int64_t>(amplitudes.size()); }
};

/// Uniform draws on [-1, 1), one per node, from the pinned generator
/// (kPrngAlgorithm). Bit-reproducible for a given seed.
template <typename Scalar>
Eigen::VectorX<Scalar> uniform_noise(std::uint64_t seed, Eigen::Index count) {
  std::mt19937_64 rng(seed);
  Eigen::VectorX<Scalar> noise(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
    noise[j] = Scalar(2) * static_cast<Scalar>(u) - Scalar(1);
  }
  return noise;
}

/// psi_0_j = exp(i m k0 x_j) + beta a_j with real white noise a.
template <typename Scalar>
WaveField<Scalar> make_initial_condition(const MiConfig<Scalar>& config,
                                         std::uint64_t seed) {
  config.validate();
  WaveField<Scalar> field = make_wave_field(config.grid);
  const Scalar carrier_k =
      static_cast<Scalar>(config.m) * config.grid.fundamental_wavenumber();
  const Eigen::VectorX<Scalar> noise =
      uniform_noise<Scalar>(seed, config.grid.node_count);
  for (Eigen::Index j = 0; j < config.grid.node_count; ++j) {
    field.values[j] = std::polar(Scalar(1), carrier_k * config.grid.nodes[j]) +
                      config.beta * noise[j];
  }
  return field;
}

/// Integrates member `member_index` (seed = seed_base + member_index) with the
/// split-step scheme and collects all N node amplitudes at each snapshot from
/// t_adjust onward. `snapshot_observer`, when set, sees the same snapshots.
template <typename Scalar>
SampleSet<Scalar> run_member(const MiConfig<Scalar>& config, int member_index,
                             const FieldObserver<Scalar>& snapshot_observer = {}) {
  config.validate();
  if (member_index < 0 || member_index >= config.members) {
    throw ConfigError("member index " + std::to_string(member_index) +
                      " outside ensemble of " + std::to_string(config.members));
  }
  const std::uint64_t seed = config.seed_base + static_cast<std::uint64_t>(member_index);
  SampleSet<Scalar> samples;
  samples.member_seed = seed;
  samples.amplitudes.reserve(static_cast<std::size_t>(config.snapshots_per_member() *
                                                      config.grid.node_count));
  try {
    WaveField<Scalar> field = make_initial_condition(config, seed);
    // Adjustment phase first, unobserved; the sampling cadence is anchored at
    // t_adjust so the first snapshot lands exactly there.
    field = integrate(std::move(field), config.params, config.t_adjust, Stepper::ssfm);
    auto record = [&samples, &snapshot_observer](const WaveField<Scalar>& f) {
      for (Eigen::Index j = 0; j < f.values.size(); ++j) {
        samples.amplitudes.push_back(std::abs(f.values[j]));
      }
      if (snapshot_observer) snapshot_observer(f);
    };
    field = integrate(std::move(field), config.params, config.t_end, Stepper::ssfm,
                      record, config.sample_stride);
  } catch (const NumericalError& err) {
    throw NumericalError("member " + std::to_string(member_index) + " (seed " +
                         std::to_string(seed) + "): " + err.what());
  }
  return samples;
}

template <typename Scalar = double>
struct EnsembleResult {
  SampleSet<Scalar> merged;
  std::vector<std::int64_t> member_counts;
  AmplitudeHistogram<Scalar> histogram;
};

/// Per-member observer maker, e.g. for dumping raw snapshots to disk.
template <typename Scalar>
using MemberObserverFactory = std::function<FieldObserver<Scalar>(int member_index)>;

/// Runs all members (optionally across `jobs` threads) and merges samples in
/// ascending member order, so the result is independent of scheduling.
template <typename Scalar>
EnsembleResult<Scalar> run_ensemble(
    const MiConfig<Scalar>& config, int jobs = 1,
    const std::type_identity_t<MemberObserverFactory<Scalar>>& observers = {}) {
  config.validate();
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  std::vector<SampleSet<Scalar>> member_samples(config.members);
  auto observer_for = [&observers](int m) {
    return observers ? observers(m) : FieldObserver<Scalar>{};
  };

  if (jobs == 1 || config.members == 1) {
    for (int m = 0; m < config.members; ++m) {
      member_samples[m] = run_member(config, m, observer_for(m));
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> failures(config.members);
    const int workers = std::min(jobs, config.members);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int m = next.fetch_add(1); m < config.members; m = next.fetch_add(1)) {
          try {
            member_samples[m] = run_member(config, m, observer_for(m));
          } catch (...) {
            failures[m] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (int m = 0; m < config.members; ++m) {
      if (failures[m]) std::rethrow_exception(failures[m]);  // lowest member first
    }
  }

  EnsembleResult<Scalar> result;
  result.merged.member_seed = config.seed_base;
  result.member_counts.reserve(config.members);
  std::size_t total = 0;
  for (const auto& s : member_samples) total += s.amplitudes.size();
  result.merged.amplitudes.reserve(total);
  for (auto& s : member_samples) {
    result.member_counts.push_back(s.count());
    result.merged.amplitudes.insert(result.merged.amplitudes.end(),
                                    s.amplitudes.begin(), s.amplitudes.end());
  }
  result.histogram = histogram<Scalar>(result.merged.amplitudes,
                                       default_amplitude_edges<Scalar>());
  return result;
}

}  // namespace nqho
