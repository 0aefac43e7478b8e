// SPDX-License-Identifier: Apache-2.0
//
// submimo - sub-GHz massive MIMO channel analysis toolkit
// Copyright (C) 2026 The submimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

namespace submimo::rng {

// Counter-based random numbers. A stream is addressed by a 64-bit key
// derived from (seed, domain, indices...); draw i within a stream is a pure
// function of (key, i). Any sample can therefore be evaluated out of order
// and in parallel, and results never depend on the thread layout.

/// SplitMix64 finalizer; bijective full-avalanche mix of a 64-bit word.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// Folds one word into a running key (golden-gamma increment + finalizer).
[[nodiscard]] constexpr std::uint64_t fold(std::uint64_t key, std::uint64_t word) noexcept {
    return mix64(key + 0x9e3779b97f4a7c15ULL + word);
}

/// Hashes (seed, words...) into a stream key.
template <class... Words>
[[nodiscard]] constexpr std::uint64_t key(std::uint64_t seed, Words... words) noexcept {
    std::uint64_t k = mix64(seed);
    ((k = fold(k, static_cast<std::uint64_t>(words))), ...);
    return k;
}

// Domain separators: independent uses of the same user seed must never
// share a stream.
inline constexpr std::uint64_t domain_channel = 0x6368616e6e656cULL;
inline constexpr std::uint64_t domain_corr_trial = 0x636f7272ULL;

class Stream {
  public:
    explicit constexpr Stream(std::uint64_t stream_key) noexcept : key_(stream_key) {}

    constexpr std::uint64_t next_u64() noexcept { return fold(key_, counter_++); }

    /// Uniform on (0, 1]; never 0, so it is safe under std::log.
    [[nodiscard]] double next_unit() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform integer on [0, n), unbiased via rejection. Requires n >= 1.
    [[nodiscard]] std::uint64_t next_below(std::uint64_t n) noexcept {
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % n;
            }
        }
    }

    /// Pair of independent standard normals (Box-Muller).
    [[nodiscard]] std::pair<double, double> next_gaussian_pair() noexcept {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    /// Circularly-symmetric complex normal CN(0, 1): zero mean, unit
    /// variance split equally between real and imaginary parts.
    [[nodiscard]] std::complex<double> next_cn01() noexcept {
        const auto [a, b] = next_gaussian_pair();
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        return {a * inv_sqrt2, b * inv_sqrt2};
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace submimo::rng
