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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "submimo/array_geometry.hpp"
#include "submimo/channel_tensor.hpp"
#include "submimo/db.hpp"
#include "submimo/parallel.hpp"
#include "submimo/rng.hpp"

namespace submimo {

// Synthetic channels with known statistics: Rayleigh and Rician small-scale
// fading plus an optional per-antenna large-scale profile. Samples are
// keyed by (seed, n, f, m), so a tensor is bit-identical no matter how the
// generation loop is parallelized. Normalization is unit average power per
// antenna element; the large-scale profile is applied multiplicatively on
// top of that.

struct SynthConfig {
    enum class Model { IidRayleigh, Rician, Constant };

    Model model = Model::IidRayleigh;
    std::size_t n_snapshots = 1;
    std::size_t n_subcarriers = 1;
    std::size_t n_antennas = 1;
    double k_factor_linear = 0.0; // Rician only
    double azimuth_rad = 0.0;     // Rician line-of-sight direction
    double elevation_rad = 0.0;
    std::complex<double> constant_value{1.0, 0.0};
    std::optional<std::vector<double>> large_scale_db;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_snapshots < 1 || n_subcarriers < 1 || n_antennas < 1) {
            throw std::invalid_argument("SynthConfig: dimensions must be >= 1");
        }
        if (!(k_factor_linear >= 0.0) || !std::isfinite(k_factor_linear)) {
            throw std::invalid_argument("SynthConfig: K-factor must be >= 0");
        }
        if (large_scale_db && large_scale_db->size() != n_antennas) {
            throw std::invalid_argument("SynthConfig: large-scale profile length must equal M");
        }
    }
};

namespace detail {

/// Rounds to the nearest float32 and widens back. The volatile keeps the
/// narrowing store observable; GCC's SLP vectorizer otherwise merges the
/// round trip away at -O3, and quantization must not depend on build flags.
[[nodiscard]] inline double round_to_f32(double v) {
    volatile float narrowed = static_cast<float>(v);
    return static_cast<double>(narrowed);
}

[[nodiscard]] inline std::complex<double> quantize_f32(std::complex<double> v) {
    return {round_to_f32(v.real()), round_to_f32(v.imag())};
}

/// CN(0,1) draw for cell (n, f, m); float32-quantized so generated tensors
/// survive the dataset payload format bit-exactly.
[[nodiscard]] inline std::complex<double> channel_sample(std::uint64_t seed, std::size_t n,
                                                         std::size_t f, std::size_t m) {
    rng::Stream stream(rng::key(seed, rng::domain_channel, n, f, m));
    return quantize_f32(stream.next_cn01());
}

} // namespace detail

/// i.i.d. CN(0,1) tensor (unit average power per element); deterministic
/// for a fixed seed, independent of n_threads.
[[nodiscard]] inline ChannelTensor gen_iid_rayleigh(std::size_t n_snapshots,
                                                    std::size_t n_subcarriers,
                                                    std::size_t n_antennas, std::uint64_t seed,
                                                    unsigned n_threads = 1) {
    if (n_snapshots < 1 || n_subcarriers < 1 || n_antennas < 1) {
        throw std::invalid_argument("gen_iid_rayleigh: dimensions must be >= 1");
    }
    const std::size_t total = n_snapshots * n_subcarriers * n_antennas;
    std::vector<std::complex<double>> samples(total);
    const std::size_t per_snapshot = n_subcarriers * n_antennas;
    parallel_for(n_snapshots, n_threads, [&](std::size_t n) {
        std::size_t i = n * per_snapshot;
        for (std::size_t f = 0; f < n_subcarriers; ++f) {
            for (std::size_t m = 0; m < n_antennas; ++m, ++i) {
                samples[i] = detail::channel_sample(seed, n, f, m);
            }
        }
    });
    return ChannelTensor(n_snapshots, n_subcarriers, n_antennas, std::move(samples));
}

/// Narrowband plane-wave steering vector: element m carries
/// exp(j * 2*pi/lambda * <p_m, u>) with u the unit propagation direction
/// (azimuth from broadside in the horizontal plane, then elevation).
[[nodiscard]] inline std::vector<std::complex<double>>
steering_vector(const ArrayGeometry& geometry, double azimuth_rad, double elevation_rad) {
    geometry.validate();
    const double ce = std::cos(elevation_rad);
    const std::array<double, 3> u = {ce * std::cos(azimuth_rad), ce * std::sin(azimuth_rad),
                                     std::sin(elevation_rad)};
    const double wavenumber = 2.0 * std::numbers::pi / geometry.wavelength_m;
    std::vector<std::complex<double>> v;
    v.reserve(geometry.size());
    for (const auto& p : geometry.element_positions) {
        const double phase = wavenumber * (p[0] * u[0] + p[1] * u[1] + p[2] * u[2]);
        v.push_back(std::polar(1.0, phase));
    }
    return v;
}

/// Rician fading around a deterministic plane wave:
///   h = sqrt(K/(K+1)) * a(az, el) + sqrt(1/(K+1)) * w,  w ~ CN(0,1) i.i.d.
/// Per-sample second moment is 1 for any K. At K = 0 the diffuse draws are
/// keyed exactly as gen_iid_rayleigh, so the two generators coincide.
[[nodiscard]] inline ChannelTensor gen_rician(const SynthConfig& config,
                                              const ArrayGeometry& geometry,
                                              unsigned n_threads = 1) {
    config.validate();
    if (config.model != SynthConfig::Model::Rician) {
        throw std::invalid_argument("gen_rician: config.model must be Rician");
    }
    if (geometry.size() != config.n_antennas) {
        throw std::invalid_argument("gen_rician: geometry element count must equal M");
    }
    const auto los = steering_vector(geometry, config.azimuth_rad, config.elevation_rad);
    const double k = config.k_factor_linear;
    const double los_scale = std::sqrt(k / (k + 1.0));
    const double diffuse_scale = std::sqrt(1.0 / (k + 1.0));

    const std::size_t n_sub = config.n_subcarriers;
    const std::size_t n_ant = config.n_antennas;
    std::vector<std::complex<double>> samples(config.n_snapshots * n_sub * n_ant);
    parallel_for(config.n_snapshots, n_threads, [&](std::size_t n) {
        std::size_t i = n * n_sub * n_ant;
        for (std::size_t f = 0; f < n_sub; ++f) {
            for (std::size_t m = 0; m < n_ant; ++m, ++i) {
                const auto w = detail::channel_sample(config.seed, n, f, m);
                samples[i] = detail::quantize_f32(los_scale * los[m] + diffuse_scale * w);
            }
        }
    });
    return ChannelTensor(config.n_snapshots, n_sub, n_ant, std::move(samples));
}

/// Scales antenna m by 10^(gains_db[m]/20) (amplitude), i.e. adds
/// gains_db[m] to its average power in dB. Returns a new tensor.
[[nodiscard]] inline ChannelTensor apply_large_scale(const ChannelTensor& tensor,
                                                     std::span<const double> gains_db) {
    if (gains_db.size() != tensor.n_antennas()) {
        throw std::invalid_argument("apply_large_scale: gains length " +
                                    std::to_string(gains_db.size()) +
                                    " does not match antenna count " +
                                    std::to_string(tensor.n_antennas()));
    }
    std::vector<double> scale(gains_db.size());
    for (std::size_t m = 0; m < gains_db.size(); ++m) {
        if (!std::isfinite(gains_db[m])) {
            throw std::invalid_argument("apply_large_scale: non-finite gain for antenna " +
                                        std::to_string(m));
        }
        scale[m] = amplitude_from_db(gains_db[m]);
    }
    std::vector<std::complex<double>> samples(tensor.samples().begin(), tensor.samples().end());
    const std::size_t n_ant = tensor.n_antennas();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] *= scale[i % n_ant];
    }
    return ChannelTensor(tensor.n_snapshots(), tensor.n_subcarriers(), n_ant, std::move(samples),
                         tensor.meta());
}

/// Dispatches on config.model; geometry is required for Rician.
[[nodiscard]] inline ChannelTensor generate(const SynthConfig& config,
                                            const std::optional<ArrayGeometry>& geometry =
                                                std::nullopt,
                                            unsigned n_threads = 1) {
    config.validate();
    ChannelTensor tensor = [&] {
        switch (config.model) {
        case SynthConfig::Model::IidRayleigh:
            return gen_iid_rayleigh(config.n_snapshots, config.n_subcarriers, config.n_antennas,
                                    config.seed, n_threads);
        case SynthConfig::Model::Rician:
            if (!geometry) {
                throw std::invalid_argument("generate: Rician model needs an array geometry");
            }
            return gen_rician(config, *geometry, n_threads);
        default:
            return ChannelTensor::filled(config.n_snapshots, config.n_subcarriers,
                                         config.n_antennas,
                                         detail::quantize_f32(config.constant_value));
        }
    }();
    if (config.large_scale_db) {
        tensor = apply_large_scale(tensor, *config.large_scale_db);
    }
    return tensor;
}

} // namespace submimo
