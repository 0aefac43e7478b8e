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
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "submimo/channel_tensor.hpp"
#include "submimo/db.hpp"
#include "submimo/parallel.hpp"
#include "submimo/rng.hpp"

namespace submimo {

// Channel statistics. Conventions, fixed project-wide:
//  * variances are population variances (divide by the count), so the
//    1/M laws for i.i.d. Rayleigh inputs hold exactly in expectation;
//  * expectations over a tensor run jointly over snapshots and
//    subcarriers (N*F realizations);
//  * antenna subsets are contiguous prefixes in element-index order.

/// Channel-hardening ratio Var(||h||^2)/E[||h||^2]^2 as a function of the
/// number of selected antennas. Vanishes as the selection grows when the
/// channel hardens.
struct HardeningCurve {
    std::vector<std::pair<std::size_t, double>> points; // (m_selected, ratio)
    std::string selection_policy = "contiguous-prefix";

    void validate() const {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i > 0 && points[i].first <= points[i - 1].first) {
                throw std::invalid_argument("HardeningCurve: m values must be strictly increasing");
            }
            if (!std::isfinite(points[i].second) || points[i].second < 0.0) {
                throw std::invalid_argument("HardeningCurve: ratios must be finite and >= 0");
            }
        }
    }
};

/// Monte-Carlo estimate of the mean correlation coefficient between two
/// positions for one antenna-subset size.
struct CorrelationEstimate {
    std::size_t m_selected = 0;
    double mean_delta = 0.0; // in [0, 1]
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Combined channel power over the first m antennas, averaged over
/// subcarriers, for every snapshot: g_n = (1/F) sum_f ||h_{0..m-1}(n,f)||^2.
[[nodiscard]] inline std::vector<double> snapshot_powers(const ChannelTensor& tensor,
                                                         std::size_t m_selected) {
    if (m_selected < 1 || m_selected > tensor.n_antennas()) {
        throw std::invalid_argument("antenna selection " + std::to_string(m_selected) +
                                    " outside [1, " + std::to_string(tensor.n_antennas()) + "]");
    }
    const std::size_t n_snap = tensor.n_snapshots();
    const std::size_t n_sub = tensor.n_subcarriers();
    std::vector<double> powers(n_snap);
    for (std::size_t n = 0; n < n_snap; ++n) {
        double acc = 0.0;
        for (std::size_t f = 0; f < n_sub; ++f) {
            const auto row = tensor.antenna_row(n, f);
            for (std::size_t m = 0; m < m_selected; ++m) {
                acc += std::norm(row[m]);
            }
        }
        powers[n] = acc / static_cast<double>(n_sub);
    }
    return powers;
}

} // namespace detail

/// Per-antenna channel gain averaged over time and frequency:
/// entry m = 10*log10( (1/(N*F)) sum_{n,f} |h_m(n,f)|^2 ). Averaging out
/// the small-scale fading leaves the large-scale coefficient per antenna.
[[nodiscard]] inline GainProfile avg_gain_per_antenna(const ChannelTensor& tensor) {
    const std::size_t n_ant = tensor.n_antennas();
    std::vector<double> mean_power(n_ant, 0.0);
    const auto samples = tensor.samples();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        mean_power[i % n_ant] += std::norm(samples[i]);
    }
    const double realizations = static_cast<double>(tensor.n_snapshots() * tensor.n_subcarriers());
    GainProfile profile;
    profile.per_antenna_gain_db.resize(n_ant);
    for (std::size_t m = 0; m < n_ant; ++m) {
        if (mean_power[m] <= 0.0) {
            throw std::invalid_argument("avg_gain_per_antenna: antenna " + std::to_string(m) +
                                        " has zero average power (dB undefined)");
        }
        profile.per_antenna_gain_db[m] = db_from_power(mean_power[m] / realizations);
    }
    if (tensor.meta()) {
        profile.scenario = to_string(tensor.meta()->scenario);
    }
    profile.n_snapshots = tensor.n_snapshots();
    profile.n_subcarriers = tensor.n_subcarriers();
    profile.n_antennas = n_ant;
    return profile;
}

/// Population standard deviation of the per-antenna dB gains; the spread
/// of large-scale fading over the array.
[[nodiscard]] inline double gain_std_db(const GainProfile& profile) {
    const auto& gains = profile.per_antenna_gain_db;
    if (gains.size() < 2) {
        throw std::invalid_argument("gain_std_db: need at least 2 antennas");
    }
    double mean = 0.0;
    for (double g : gains) {
        mean += g;
    }
    mean /= static_cast<double>(gains.size());
    double acc = 0.0;
    for (double g : gains) {
        acc += (g - mean) * (g - mean);
    }
    return std::sqrt(acc / static_cast<double>(gains.size()));
}

/// Var(||h||^2) / E[||h||^2]^2 over the N*F realizations, with ||.|| taken
/// over the first m_selected antennas. 1/M for i.i.d. Rayleigh; 0 for a
/// deterministic channel.
[[nodiscard]] inline double hardening_ratio(const ChannelTensor& tensor,
                                            std::size_t m_selected) {
    const std::size_t n_real = tensor.n_snapshots() * tensor.n_subcarriers();
    if (n_real < 2) {
        throw std::invalid_argument("hardening_ratio: need N*F >= 2 for a variance");
    }
    if (m_selected < 1 || m_selected > tensor.n_antennas()) {
        throw std::invalid_argument("hardening_ratio: antenna selection outside [1, M]");
    }
    // Norms per (snapshot, subcarrier) realization.
    std::vector<double> norms;
    norms.reserve(n_real);
    for (std::size_t n = 0; n < tensor.n_snapshots(); ++n) {
        for (std::size_t f = 0; f < tensor.n_subcarriers(); ++f) {
            const auto row = tensor.antenna_row(n, f);
            double acc = 0.0;
            for (std::size_t m = 0; m < m_selected; ++m) {
                acc += std::norm(row[m]);
            }
            norms.push_back(acc);
        }
    }
    double mean = 0.0;
    for (double v : norms) {
        mean += v;
    }
    mean /= static_cast<double>(norms.size());
    if (mean <= 0.0) {
        throw std::invalid_argument("hardening_ratio: selected antennas carry zero power");
    }
    double var = 0.0;
    for (double v : norms) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(norms.size());
    return var / (mean * mean);
}

/// hardening_ratio for each entry of a strictly increasing m list.
[[nodiscard]] inline HardeningCurve hardening_curve(const ChannelTensor& tensor,
                                                    std::span<const std::size_t> m_list) {
    HardeningCurve curve;
    curve.points.reserve(m_list.size());
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (i > 0 && m_list[i] <= m_list[i - 1]) {
            throw std::invalid_argument("hardening_curve: m list must be strictly increasing");
        }
        curve.points.emplace_back(m_list[i], hardening_ratio(tensor, m_list[i]));
    }
    curve.validate();
    return curve;
}

/// Divides every sample by the RMS over the whole tensor, so the mean
/// per-sample power of the result is 1.
[[nodiscard]] inline ChannelTensor normalize_channels(const ChannelTensor& tensor) {
    double total = 0.0;
    for (const auto& s : tensor.samples()) {
        total += std::norm(s);
    }
    const double mean_power = total / static_cast<double>(tensor.size());
    if (mean_power <= 0.0) {
        throw std::invalid_argument("normalize_channels: tensor has zero total power");
    }
    const double scale = 1.0 / std::sqrt(mean_power);
    std::vector<std::complex<double>> samples;
    samples.reserve(tensor.size());
    for (const auto& s : tensor.samples()) {
        samples.push_back(s * scale);
    }
    return ChannelTensor(tensor.n_snapshots(), tensor.n_subcarriers(), tensor.n_antennas(),
                         std::move(samples), tensor.meta());
}

/// Correlation coefficient between two channel vectors:
///   delta = |<h_i, h_j>|^2 / (||h_i||^2 * ||h_j||^2)
/// with the conjugated inner product. 1 for parallel vectors, 0 for
/// orthogonal ones; invariant under scaling of either argument.
[[nodiscard]] inline double correlation_coefficient(std::span<const std::complex<double>> h_i,
                                                    std::span<const std::complex<double>> h_j) {
    if (h_i.size() != h_j.size() || h_i.empty()) {
        throw std::invalid_argument("correlation_coefficient: vectors must have equal length >= 1");
    }
    std::complex<double> inner{0.0, 0.0};
    double norm_i = 0.0;
    double norm_j = 0.0;
    for (std::size_t m = 0; m < h_i.size(); ++m) {
        inner += h_i[m] * std::conj(h_j[m]);
        norm_i += std::norm(h_i[m]);
        norm_j += std::norm(h_j[m]);
    }
    if (norm_i <= 0.0 || norm_j <= 0.0) {
        throw std::invalid_argument("correlation_coefficient: zero vector");
    }
    return std::norm(inner) / (norm_i * norm_j);
}

/// Mean correlation coefficient between random position pairs versus the
/// number of selected antennas. Each trial draws a pair of distinct
/// positions plus one shared (snapshot, subcarrier) index and evaluates
/// the contiguous first-m antenna subset. Trials are keyed by
/// (seed, m, trial), so estimates are reproducible and independent of both
/// the thread count and the composition of m_list.
[[nodiscard]] inline std::vector<CorrelationEstimate>
avg_correlation_vs_m(std::span<const ChannelTensor> positions,
                     std::span<const std::size_t> m_list, std::size_t n_trials,
                     std::uint64_t seed, unsigned n_threads = 1) {
    if (positions.size() < 2) {
        throw std::invalid_argument("avg_correlation_vs_m: need at least 2 positions");
    }
    const std::size_t n_snap = positions[0].n_snapshots();
    const std::size_t n_sub = positions[0].n_subcarriers();
    const std::size_t n_ant = positions[0].n_antennas();
    for (const auto& p : positions) {
        if (p.n_snapshots() != n_snap || p.n_subcarriers() != n_sub ||
            p.n_antennas() != n_ant) {
            throw std::invalid_argument("avg_correlation_vs_m: positions must share dimensions");
        }
    }
    if (n_trials < 1) {
        throw std::invalid_argument("avg_correlation_vs_m: need at least 1 trial");
    }

    std::vector<CorrelationEstimate> estimates;
    estimates.reserve(m_list.size());
    std::vector<double> deltas(n_trials);
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        const std::size_t m = m_list[i];
        if (i > 0 && m <= m_list[i - 1]) {
            throw std::invalid_argument("avg_correlation_vs_m: m list must be strictly increasing");
        }
        if (m < 1 || m > n_ant) {
            throw std::invalid_argument("avg_correlation_vs_m: antenna selection outside [1, M]");
        }
        parallel_for(n_trials, n_threads, [&](std::size_t trial) {
            rng::Stream stream(rng::key(seed, rng::domain_corr_trial, m, trial));
            const std::size_t pos_i = stream.next_below(positions.size());
            std::size_t pos_j = stream.next_below(positions.size() - 1);
            if (pos_j >= pos_i) {
                ++pos_j;
            }
            const std::size_t n = stream.next_below(n_snap);
            const std::size_t f = stream.next_below(n_sub);
            deltas[trial] = correlation_coefficient(
                positions[pos_i].antenna_row(n, f).first(m),
                positions[pos_j].antenna_row(n, f).first(m));
        });
        double mean = 0.0;
        for (double d : deltas) {
            mean += d;
        }
        mean /= static_cast<double>(n_trials);
        estimates.push_back({m, mean, n_trials, seed});
    }
    return estimates;
}

/// Post-combining channel gain over time for the first m_selected
/// antennas: point n = 10*log10( (1/F) sum_f ||h(n,f)||^2 ). The series
/// for the full array sits an array gain above the single-antenna one and
/// fluctuates far less once the channel hardens.
[[nodiscard]] inline std::vector<double> combined_gain_series(const ChannelTensor& tensor,
                                                              std::size_t m_selected) {
    auto powers = detail::snapshot_powers(tensor, m_selected);
    std::vector<double> series(powers.size());
    for (std::size_t n = 0; n < powers.size(); ++n) {
        if (powers[n] <= 0.0) {
            throw std::invalid_argument("combined_gain_series: snapshot " + std::to_string(n) +
                                        " has zero combined power");
        }
        series[n] = db_from_power(powers[n]);
    }
    return series;
}

} // namespace submimo
