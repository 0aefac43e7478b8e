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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "submimo/channel_tensor.hpp"
#include "submimo/db.hpp"
#include "submimo/metrics.hpp"

namespace submimo {

// Uplink link-level results with perfect CSI: single-antenna reception
// versus maximal-ratio combining, outage statistics, and the transmit
// power a node needs to hit an SNR target at a given outage.

/// Link parameters. Noise is a power over the occupied bandwidth (not a
/// density), which keeps the simulator numerology-agnostic.
struct LinkBudget {
    double tx_power_dbm = 0.0;
    double noise_power_dbm = -120.0;
    double target_snr_db = 0.0;
    double target_outage = 0.01; // fraction in (0, 1)

    void validate() const {
        if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_power_dbm) ||
            !std::isfinite(target_snr_db)) {
            throw std::invalid_argument("LinkBudget: powers must be finite");
        }
        if (!(target_outage > 0.0) || !(target_outage < 1.0)) {
            throw std::invalid_argument("LinkBudget: target outage must be in (0, 1)");
        }
    }
};

/// Thermal noise power over a bandwidth: -174 dBm/Hz + 10*log10(BW) + NF.
[[nodiscard]] inline double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
    if (!(bandwidth_hz > 0.0)) {
        throw std::invalid_argument("noise_power_dbm: bandwidth must be positive");
    }
    return -174.0 + db_from_power(bandwidth_hz) + noise_figure_db;
}

struct Combiner {
    enum class Kind { SingleAntenna, Mrc };

    Kind kind = Kind::Mrc;
    std::size_t value = 1; // antenna index for SingleAntenna, count for Mrc

    [[nodiscard]] static Combiner single(std::size_t antenna_index) {
        return {Kind::SingleAntenna, antenna_index};
    }
    [[nodiscard]] static Combiner mrc(std::size_t m_selected) { return {Kind::Mrc, m_selected}; }

    [[nodiscard]] std::string label() const {
        return kind == Kind::SingleAntenna ? "single(" + std::to_string(value) + ")"
                                           : "mrc(" + std::to_string(value) + ")";
    }
};

/// Per-snapshot post-combining SNR in dB.
struct SnrSeries {
    std::vector<double> snr_db;
    std::string combiner_label;
    std::size_t m_selected = 1;
};

/// Post-MRC SNR for one channel vector:
///   SNR(dB) = P_tx - P_noise + 10*log10(||h||^2).
[[nodiscard]] inline double mrc_snr(std::span<const std::complex<double>> h, double tx_power_dbm,
                                    double noise_power_dbm) {
    double norm_sq = 0.0;
    for (const auto& v : h) {
        norm_sq += std::norm(v);
    }
    if (norm_sq <= 0.0) {
        throw std::invalid_argument("mrc_snr: zero channel vector");
    }
    return tx_power_dbm - noise_power_dbm + db_from_power(norm_sq);
}

namespace detail {

/// Subcarrier-averaged channel power per snapshot for the combiner's
/// antenna selection.
[[nodiscard]] inline std::vector<double> combiner_powers(const ChannelTensor& tensor,
                                                         Combiner combiner) {
    if (combiner.kind == Combiner::Kind::Mrc) {
        return snapshot_powers(tensor, combiner.value);
    }
    const std::size_t index = combiner.value;
    if (index >= tensor.n_antennas()) {
        throw std::invalid_argument("combiner: antenna index " + std::to_string(index) +
                                    " outside [0, " + std::to_string(tensor.n_antennas()) + ")");
    }
    const std::size_t n_sub = tensor.n_subcarriers();
    std::vector<double> powers(tensor.n_snapshots());
    for (std::size_t n = 0; n < powers.size(); ++n) {
        double acc = 0.0;
        for (std::size_t f = 0; f < n_sub; ++f) {
            acc += std::norm(tensor.at(n, f, index));
        }
        powers[n] = acc / static_cast<double>(n_sub);
    }
    return powers;
}

} // namespace detail

/// SNR over time for the chosen combiner: per snapshot the
/// subcarrier-averaged channel power feeds the MRC SNR formula.
[[nodiscard]] inline SnrSeries simulate_uplink(const ChannelTensor& tensor,
                                               const LinkBudget& budget, Combiner combiner) {
    budget.validate();
    const auto powers = detail::combiner_powers(tensor, combiner);
    SnrSeries series;
    series.combiner_label = combiner.label();
    series.m_selected = combiner.kind == Combiner::Kind::Mrc ? combiner.value : 1;
    series.snr_db.resize(powers.size());
    for (std::size_t n = 0; n < powers.size(); ++n) {
        if (powers[n] <= 0.0) {
            throw std::invalid_argument("simulate_uplink: snapshot " + std::to_string(n) +
                                        " has zero channel power");
        }
        series.snr_db[n] = budget.tx_power_dbm - budget.noise_power_dbm +
                           db_from_power(powers[n]);
    }
    return series;
}

/// Fraction of snapshots whose SNR falls below the target.
[[nodiscard]] inline double outage_probability(const SnrSeries& series, double target_snr_db) {
    if (series.snr_db.empty()) {
        throw std::invalid_argument("outage_probability: empty series");
    }
    std::size_t below = 0;
    for (double snr : series.snr_db) {
        if (snr < target_snr_db) {
            ++below;
        }
    }
    return static_cast<double>(below) / static_cast<double>(series.snr_db.size());
}

/// Minimal transmit power (dBm) for which the outage stays at or below the
/// target, from the empirical quantile of the channel-power series: with
/// k = floor(outage * N) tolerated failures, the (k+1)-th smallest
/// snapshot power must still meet the SNR target.
[[nodiscard]] inline double required_tx_power(const ChannelTensor& tensor,
                                              const LinkBudget& budget, Combiner combiner,
                                              double target_snr_db, double target_outage) {
    if (!(target_outage > 0.0) || !(target_outage < 1.0)) {
        throw std::invalid_argument("required_tx_power: target outage must be in (0, 1)");
    }
    if (!std::isfinite(target_snr_db) || !std::isfinite(budget.noise_power_dbm)) {
        throw std::invalid_argument("required_tx_power: target SNR and noise must be finite");
    }
    auto powers = detail::combiner_powers(tensor, combiner);
    const auto allowed_failures = static_cast<std::size_t>(
        target_outage * static_cast<double>(powers.size()));
    std::nth_element(powers.begin(), powers.begin() + static_cast<std::ptrdiff_t>(allowed_failures),
                     powers.end());
    const double quantile_power = powers[allowed_failures];
    if (quantile_power <= 0.0) {
        throw std::invalid_argument("required_tx_power: target unattainable, channel power is "
                                    "zero at the allowed outage quantile");
    }
    return target_snr_db + budget.noise_power_dbm - db_from_power(quantile_power);
}

/// Least-squares channel estimate from one pilot observation per antenna:
/// h_hat = y / p.
[[nodiscard]] inline std::vector<std::complex<double>>
estimate_channel_ls(std::span<const std::complex<double>> rx_pilots,
                    std::complex<double> pilot_symbol) {
    if (pilot_symbol == std::complex<double>{0.0, 0.0}) {
        throw std::invalid_argument("estimate_channel_ls: pilot symbol must be nonzero");
    }
    std::vector<std::complex<double>> estimate;
    estimate.reserve(rx_pilots.size());
    for (const auto& y : rx_pilots) {
        estimate.push_back(y / pilot_symbol);
    }
    return estimate;
}

} // namespace submimo
