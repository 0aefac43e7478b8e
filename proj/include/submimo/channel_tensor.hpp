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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace submimo {

enum class Scenario { LoS, NLoS, Unknown };

[[nodiscard]] inline std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::LoS:
        return "LoS";
    case Scenario::NLoS:
        return "NLoS";
    default:
        return "Unknown";
    }
}

[[nodiscard]] inline Scenario scenario_from_string(const std::string& s) {
    if (s == "LoS") {
        return Scenario::LoS;
    }
    if (s == "NLoS") {
        return Scenario::NLoS;
    }
    if (s == "Unknown") {
        return Scenario::Unknown;
    }
    throw std::invalid_argument("unknown scenario '" + s + "' (expected LoS, NLoS or Unknown)");
}

/// Measurement-setup metadata carried alongside a CSI tensor. Defaults
/// describe the reference sub-GHz campaign setup (869.525 MHz carrier,
/// 32-antenna base station on a 7 m balcony, single moving node).
struct MeasurementMeta {
    double carrier_freq_hz = 869.525e6;
    std::size_t n_subcarriers_used = 2;
    std::size_t n_snapshots = 1000;
    double tx_power_dbm = 22.6;
    std::size_t n_bs_antennas = 32;
    std::size_t n_nodes = 1;
    std::string array_label = "ULA";
    double sample_interval_s = 10e-3;
    double sample_duration_s = 66.67e-6;
    double bs_height_m = 7.0;
    double ue_height_m = 1.5;
    std::string modulation = "QPSK";
    Scenario scenario = Scenario::Unknown;
    std::string path_label; // empty = unset

    /// Unrecognized dataset-header keys, preserved verbatim across a
    /// save/load round trip.
    nlohmann::json extra = nlohmann::json::object();

    void validate() const {
        if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz)) {
            throw std::invalid_argument("MeasurementMeta: carrier_freq_hz must be positive");
        }
        if (!(sample_interval_s > 0.0) || !std::isfinite(sample_interval_s)) {
            throw std::invalid_argument("MeasurementMeta: sample_interval_s must be positive");
        }
        if (!(sample_duration_s > 0.0) || !std::isfinite(sample_duration_s)) {
            throw std::invalid_argument("MeasurementMeta: sample_duration_s must be positive");
        }
        if (n_nodes < 1) {
            throw std::invalid_argument("MeasurementMeta: n_nodes must be >= 1");
        }
        if (n_subcarriers_used < 1 || n_snapshots < 1 || n_bs_antennas < 1) {
            throw std::invalid_argument("MeasurementMeta: tensor dimensions must be >= 1");
        }
    }

    bool operator==(const MeasurementMeta&) const = default;
};

/// Complex CSI samples indexed [snapshot][subcarrier][antenna], row-major.
/// Samples are dimensionless linear voltage gains. Immutable after
/// construction, so instances can be shared freely across threads.
class ChannelTensor {
  public:
    ChannelTensor(std::size_t n_snapshots, std::size_t n_subcarriers, std::size_t n_antennas,
                  std::vector<std::complex<double>> samples,
                  std::optional<MeasurementMeta> meta = std::nullopt)
        : n_(n_snapshots), f_(n_subcarriers), m_(n_antennas), samples_(std::move(samples)),
          meta_(std::move(meta)) {
        if (n_ < 1 || f_ < 1 || m_ < 1) {
            throw std::invalid_argument("ChannelTensor: dimensions must be >= 1");
        }
        if (samples_.size() != n_ * f_ * m_) {
            throw std::invalid_argument(
                "ChannelTensor: sample count " + std::to_string(samples_.size()) +
                " does not match N*F*M = " + std::to_string(n_ * f_ * m_));
        }
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            if (!std::isfinite(samples_[i].real()) || !std::isfinite(samples_[i].imag())) {
                throw std::invalid_argument("ChannelTensor: non-finite sample at flat index " +
                                            std::to_string(i));
            }
        }
        if (meta_) {
            meta_->validate();
        }
    }

    /// Constant tensor h == value everywhere.
    [[nodiscard]] static ChannelTensor filled(std::size_t n, std::size_t f, std::size_t m,
                                              std::complex<double> value) {
        return ChannelTensor(n, f, m,
                             std::vector<std::complex<double>>(n * f * m, value));
    }

    [[nodiscard]] std::size_t n_snapshots() const noexcept { return n_; }
    [[nodiscard]] std::size_t n_subcarriers() const noexcept { return f_; }
    [[nodiscard]] std::size_t n_antennas() const noexcept { return m_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }

    [[nodiscard]] std::size_t flat_index(std::size_t n, std::size_t f,
                                         std::size_t m) const noexcept {
        return (n * f_ + f) * m_ + m;
    }

    [[nodiscard]] const std::complex<double>& at(std::size_t n, std::size_t f,
                                                 std::size_t m) const {
        if (n >= n_ || f >= f_ || m >= m_) {
            throw std::out_of_range("ChannelTensor: index (" + std::to_string(n) + "," +
                                    std::to_string(f) + "," + std::to_string(m) +
                                    ") out of range");
        }
        return samples_[flat_index(n, f, m)];
    }

    [[nodiscard]] std::span<const std::complex<double>> samples() const noexcept {
        return samples_;
    }

    /// Row of M antenna samples for one (snapshot, subcarrier).
    [[nodiscard]] std::span<const std::complex<double>> antenna_row(std::size_t n,
                                                                    std::size_t f) const {
        if (n >= n_ || f >= f_) {
            throw std::out_of_range("ChannelTensor: row (" + std::to_string(n) + "," +
                                    std::to_string(f) + ") out of range");
        }
        return {samples_.data() + (n * f_ + f) * m_, m_};
    }

    [[nodiscard]] const std::optional<MeasurementMeta>& meta() const noexcept { return meta_; }

    /// Same samples, different metadata.
    [[nodiscard]] ChannelTensor with_meta(MeasurementMeta meta) const {
        return ChannelTensor(n_, f_, m_, samples_, std::move(meta));
    }

    bool operator==(const ChannelTensor& other) const = default;

  private:
    std::size_t n_;
    std::size_t f_;
    std::size_t m_;
    std::vector<std::complex<double>> samples_;
    std::optional<MeasurementMeta> meta_;
};

/// Per-antenna time/frequency-averaged channel gain in dB (the large-scale
/// fading profile over the array).
struct GainProfile {
    std::vector<double> per_antenna_gain_db;
    std::string scenario = "Unknown";
    std::size_t n_snapshots = 0;   // source tensor dims; 0 = unknown origin
    std::size_t n_subcarriers = 0;
    std::size_t n_antennas = 0;

    void validate() const {
        if (per_antenna_gain_db.size() != n_antennas) {
            throw std::invalid_argument("GainProfile: length does not match antenna count");
        }
        for (double g : per_antenna_gain_db) {
            if (!std::isfinite(g)) {
                throw std::invalid_argument("GainProfile: non-finite gain value");
            }
        }
    }
};

} // namespace submimo
