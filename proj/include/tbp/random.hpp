// Copyright 2026 The TBP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

namespace tbp {

/// SplitMix64 (Steele, Lea & Flood 2014) with the published constants.
///
/// Every random decision in the library goes through this generator and the
/// derived helpers below, never through <random> distributions, so streams are
/// reproducible across standard libraries and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) by 128-bit multiply-shift. Requires n > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    const unsigned __int128 product =
        static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Child generator seeded from this stream's next output.
  SplitMix64 split() { return SplitMix64(next()); }

  /// Unit-rate exponential variate, -log(u) with u in (0, 1].
  double exponential() { return -std::log(1.0 - uniform()); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Independent seed for a named sub-stream of a run (sampling, fold-in,
/// splits), so adding one consumer never shifts another's draws.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(seed ^ (stream * 0xD1B54A32D192ED03ULL)).next();
}

/// Fisher-Yates shuffle driven by uniform_index, walking from the back.
template <typename T>
void shuffle(std::span<T> values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(values[i - 1], values[j]);
  }
}

/// Draws from Dirichlet(1, ..., 1) into `out` via normalized exponentials.
inline void sample_flat_dirichlet(std::span<double> out, SplitMix64& rng) {
  double total = 0.0;
  for (double& v : out) {
    v = rng.exponential();
    total += v;
  }
  if (total <= 0.0) {
    for (double& v : out) v = 1.0 / static_cast<double>(out.size());
    return;
  }
  for (double& v : out) v /= total;
}

/// Inverse-CDF draw from an (unnormalized) non-negative weight vector: the
/// first index whose cumulative weight exceeds u * total. Falls back to the
/// last index with positive weight when rounding leaves u at the top.
inline std::size_t sample_categorical(std::span<const double> weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = u * total;
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] > 0.0) last_positive = k;
    running += weights[k];
    if (target < running) return k;
  }
  return last_positive;
}

}  // namespace tbp
