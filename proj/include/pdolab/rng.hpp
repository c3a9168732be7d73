// Copyright 2026 The pdolab Authors
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

namespace pdolab {

// Counter-based generator built on the SplitMix64 finalizer. Draw i of a
// stream is a pure function of (seed, i), so shots can be sampled in any
// order, in any batch decomposition, on any thread count, with identical
// aggregate results.

/// SplitMix64 finalizer: bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// The i-th 64-bit draw of the stream identified by seed.
constexpr std::uint64_t rng_at(std::uint64_t seed, std::uint64_t i) {
    return mix64(seed + (i + 1) * 0x9E3779B97F4A7C15ULL);
}

/// The i-th uniform double in [0, 1), 53-bit resolution.
constexpr double uniform_at(std::uint64_t seed, std::uint64_t i) {
    return static_cast<double>(rng_at(seed, i) >> 11) * 0x1.0p-53;
}

/// Deterministic substream seed: distinct streams for distinct stream ids,
/// decorrelated from the master stream by a different multiplier.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ ((stream + 1) * 0xD1B54A32D192ED03ULL));
}

} // namespace pdolab
