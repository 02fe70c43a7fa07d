// Copyright 2026 The qka authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace qka {

/// Seeded uniform-[0,1) stream. Identical seeds reproduce identical outcome
/// sequences bit-exactly; there is no hidden global generator anywhere in the
/// library. Batch runs derive independent per-trial streams with child().
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Next double in [0, 1). Built from the top 53 bits of the mt19937_64
    /// output, so the value stream is platform-independent.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const { return seed_; }

    /// Independent stream for trial `index`, derived from this stream's seed
    /// by a splitmix64 hash. Child streams never touch the parent's state, so
    /// fan-out order does not matter.
    RandomSource child(std::uint64_t index) const {
        return RandomSource(split_seed(seed_, index));
    }

    static std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace qka
