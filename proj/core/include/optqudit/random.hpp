// Copyright 2026 The optqudit Authors
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

#include <cstdint>
#include <random>
#include <span>

namespace optqudit {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for shard/trial `index` of a run seeded with `seed`.
///
/// Counter-based: depends only on (seed, index), so any shard can be replayed on its own
/// and the result does not depend on how shards are scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Seeded random source used by every sampling routine.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard. Real-valued draws are
/// derived from raw 64-bit words here rather than through <random> distributions, which are
/// implementation-defined, so replays agree across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal draw (Box-Muller on uniform()).
    double normal();

    Rng fork(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Inverse-CDF draw of an index from `probs` (need not sum exactly to 1).
///
/// Consumes exactly one uniform() so that paired simulations fed the same seed stay in lockstep.
std::size_t sample_discrete(std::span<const double> probs, Rng &rng);

}  // namespace optqudit
