#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "nqho/errors.hpp"

namespace nqho {

/// Binned distribution of |psi| samples plus the rogue-event summary stats.
/// probabilities are counts normalized by the total sample count, so the bin
/// mass plus the overflow fraction is exactly 1.
template <typename Scalar = double>
struct AmplitudeHistogram {
  Eigen::VectorX<Scalar> bin_edges;
  Eigen::VectorX<std::int64_t> counts;
  Eigen::VectorX<Scalar> probabilities;
  Scalar significant_height{};
  Scalar rogue_threshold{};
  Scalar rogue_probability{};
  std::int64_t overflow_count{};
  std::int64_t total_samples{};
};

/// Default |psi| bins, 0 to 5 in steps of 0.1.
template <typename Scalar = double>
Eigen::VectorX<Scalar> default_amplitude_edges() {
  Eigen::VectorX<Scalar> edges(51);
  for (int i = 0; i <= 50; ++i) edges[i] = Scalar(i) / Scalar(10);
  return edges;
}

/// Mean of the largest ceil(count/3) samples (the H_{1/3} convention).
template <typename Scalar>
Scalar significant_height(std::span<const Scalar> samples) {
  if (samples.empty()) throw ConfigError("significant height of an empty sample set");
  const std::size_t top = (samples.size() + 2) / 3;
  std::vector<Scalar> sorted(samples.begin(), samples.end());
  std::nth_element(sorted.begin(), sorted.begin() + (sorted.size() - top), sorted.end());
  Scalar sum(0);
  for (std::size_t i = sorted.size() - top; i < sorted.size(); ++i) sum += sorted[i];
  return sum / static_cast<Scalar>(top);
}

/// Fraction of samples at least twice the significant height.
template <typename Scalar>
Scalar rogue_probability(std::span<const Scalar> samples, Scalar significant) {
  if (!(significant > Scalar(0))) {
    throw ConfigError("significant height must be positive");
  }
  if (samples.empty()) throw ConfigError("rogue probability of an empty sample set");
  const Scalar threshold = Scalar(2) * significant;
  std::int64_t hits = 0;
  for (const Scalar s : samples) {
    if (s >= threshold) ++hits;
  }
  return static_cast<Scalar>(hits) / static_cast<Scalar>(samples.size());
}

/// Left-closed right-open binning; samples outside [edges.front(), edges.back())
/// land in overflow_count.
template <typename Scalar>
AmplitudeHistogram<Scalar> histogram(std::span<const Scalar> samples,
                                     const Eigen::VectorX<Scalar>& edges) {
  if (edges.size() < 2) throw ConfigError("histogram needs at least two bin edges");
  for (Eigen::Index i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw ConfigError("histogram bin edges must be strictly ascending");
    }
  }
  if (samples.empty()) throw ConfigError("histogram of an empty sample set");

  AmplitudeHistogram<Scalar> hist;
  hist.bin_edges = edges;
  hist.counts = Eigen::VectorX<std::int64_t>::Zero(edges.size() - 1);
  hist.total_samples = static_cast<std::int64_t>(samples.size());
  for (const Scalar s : samples) {
    if (s < edges[0] || s >= edges[edges.size() - 1]) {
      ++hist.overflow_count;
      continue;
    }
    const auto it = std::upper_bound(edges.begin(), edges.end(), s);
    ++hist.counts[static_cast<Eigen::Index>(it - edges.begin()) - 1];
  }
  hist.probabilities.resize(hist.counts.size());
  for (Eigen::Index b = 0; b < hist.counts.size(); ++b) {
    hist.probabilities[b] =
        static_cast<Scalar>(hist.counts[b]) / static_cast<Scalar>(hist.total_samples);
  }
  hist.significant_height = significant_height(samples);
  hist.rogue_threshold = Scalar(2) * hist.significant_height;
  hist.rogue_probability = rogue_probability(samples, hist.significant_height);
  return hist;
}

/// Total probability mass of the bins fully contained in [lo, hi].
template <typename Scalar>
Scalar band_mass(const AmplitudeHistogram<Scalar>& hist, Scalar lo, Scalar hi) {
  Scalar mass(0);
  for (Eigen::Index b = 0; b + 1 < hist.bin_edges.size(); ++b) {
    if (hist.bin_edges[b] >= lo && hist.bin_edges[b + 1] <= hi) {
      mass += hist.probabilities[b];
    }
  }
  return mass;
}

template <typename Scalar = double>
struct BandComparison {
  Scalar mass_a{};
  Scalar mass_b{};
  Scalar difference{};  // mass_a - mass_b
  int ordering{};       // +1 if a > b, -1 if a < b, 0 if equal
};

/// Compares the probability mass two histograms carry in an amplitude band.
/// The histograms must share bin edges.
template <typename Scalar>
BandComparison<Scalar> trend_compare(const AmplitudeHistogram<Scalar>& a,
                                     const AmplitudeHistogram<Scalar>& b, Scalar lo,
                                     Scalar hi) {
  if (a.bin_edges.size() != b.bin_edges.size() ||
      !(a.bin_edges.array() == b.bin_edges.array()).all()) {
    throw ConfigError("trend comparison requires identical bin edges");
  }
  BandComparison<Scalar> cmp;
  cmp.mass_a = band_mass(a, lo, hi);
  cmp.mass_b = band_mass(b, lo, hi);
  cmp.difference = cmp.mass_a - cmp.mass_b;
  cmp.ordering = (cmp.difference > Scalar(0)) - (cmp.difference < Scalar(0));
  return cmp;
}

}  // namespace nqho
