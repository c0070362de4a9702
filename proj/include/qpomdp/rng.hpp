// Copyright 2026 The qpomdp Authors
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

// Deterministic random numbers.
//
// The generator is SplitMix64 (Steele, Lea, Flood 2014): a 64-bit state that
// advances by the golden-ratio increment 0x9E3779B97F4A7C15 and is passed
// through the avalanche finalizer `mix64` below. Uniform doubles take the top
// 53 bits. Substreams are derived by folding (seed, run index, site tag)
// through `mix64`, so every run and sampling site gets an independent stream
// that does not depend on scheduling. These choices are frozen: golden tests
// depend on the exact bit sequence.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace qpomdp {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// FNV-1a over the tag bytes; only used to turn site names into integers.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

class Rng {
   public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept {
        // Lemire's multiply-shift with rejection of the biased low region.
        while (true) {
            const unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
            const auto low = static_cast<std::uint64_t>(m);
            if (low >= (-bound) % bound) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    /// Number of Bernoulli(p) trials up to and including the first success.
    std::uint64_t geometric(double p) noexcept {
        if (p >= 1.0) return 1;
        const double u = 1.0 - uniform();  // (0, 1]
        return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
    }

    /// Child stream keyed by a site tag; consumes one draw from this stream.
    Rng split(std::string_view tag) noexcept { return Rng(mix64((*this)() ^ tag_hash(tag))); }

    constexpr std::uint64_t state() const noexcept { return state_; }

   private:
    std::uint64_t state_;
};

/// Independent stream for (seed, run, site) without touching any other stream.
constexpr Rng substream(std::uint64_t seed, std::uint64_t run_index, std::string_view site,
                        std::uint64_t step = 0) noexcept {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (run_index + 0x632BE59BD9B4E019ULL));
    h = mix64(h ^ tag_hash(site));
    h = mix64(h ^ (step + 0x8CB92BA72F3D8DD7ULL));
    return Rng(h);
}

/// Inverse-CDF draw from a probability vector. Zero-probability entries are
/// never returned.
inline std::size_t sample_index(std::span<const double> probs, Rng& rng) noexcept {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_positive = i;
        if (u < acc) return i;
    }
    return last_positive;
}

}  // namespace qpomdp
