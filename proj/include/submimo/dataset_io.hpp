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
//
// MMK1 dataset file format:
//   line 1: magic string "MMK1"
//   line 2: one-line JSON header; required keys n, f, m (integers >= 1),
//           plus fc_hz, tx_dbm, sample_interval_s, sample_duration_s,
//           array, scenario, path and auxiliary setup keys. Unknown keys
//           are preserved across a load/save round trip.
//   then:   N*F*M complex samples, two little-endian IEEE-754 float32
//           (re, im) each, row-major [n][f][m].

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "submimo/channel_tensor.hpp"

namespace submimo {

inline constexpr const char* mmk1_magic = "MMK1";

namespace detail {

inline void append_f32_le(std::vector<char>& out, float value) {
    const auto bits = std::bit_cast<std::uint32_t>(value);
    out.push_back(static_cast<char>(bits & 0xff));
    out.push_back(static_cast<char>((bits >> 8) & 0xff));
    out.push_back(static_cast<char>((bits >> 16) & 0xff));
    out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

[[nodiscard]] inline float read_f32_le(const char* p) {
    std::uint32_t bits = 0;
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[0]));
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[1])) << 8;
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[2])) << 16;
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[3])) << 24;
    return std::bit_cast<float>(bits);
}

[[nodiscard]] inline std::size_t require_count_key(const nlohmann::json& header,
                                                   const char* key_name) {
    if (!header.contains(key_name)) {
        throw std::runtime_error(std::string("MMK1 header: missing key '") + key_name + "'");
    }
    const auto& value = header.at(key_name);
    if (!value.is_number_integer() || value.get<std::int64_t>() < 1) {
        throw std::runtime_error(std::string("MMK1 header: key '") + key_name +
                                 "' must be an integer >= 1");
    }
    return value.get<std::size_t>();
}

[[nodiscard]] inline double take_number(nlohmann::json& header, const char* key_name,
                                        double fallback) {
    const auto it = header.find(key_name);
    if (it == header.end()) {
        return fallback;
    }
    if (!it->is_number()) {
        throw std::runtime_error(std::string("MMK1 header: key '") + key_name +
                                 "' must be a number");
    }
    const double value = it->get<double>();
    header.erase(it);
    return value;
}

[[nodiscard]] inline std::string take_string(nlohmann::json& header, const char* key_name,
                                             std::string fallback) {
    const auto it = header.find(key_name);
    if (it == header.end()) {
        return fallback;
    }
    if (!it->is_string()) {
        throw std::runtime_error(std::string("MMK1 header: key '") + key_name +
                                 "' must be a string");
    }
    std::string value = it->get<std::string>();
    header.erase(it);
    return value;
}

} // namespace detail

/// Serializes the measurement metadata into the one-line JSON header.
[[nodiscard]] inline nlohmann::json mmk1_header(const ChannelTensor& tensor,
                                                const MeasurementMeta& meta) {
    nlohmann::json header = meta.extra.is_object() ? meta.extra : nlohmann::json::object();
    header["n"] = tensor.n_snapshots();
    header["f"] = tensor.n_subcarriers();
    header["m"] = tensor.n_antennas();
    header["fc_hz"] = meta.carrier_freq_hz;
    header["tx_dbm"] = meta.tx_power_dbm;
    header["sample_interval_s"] = meta.sample_interval_s;
    header["sample_duration_s"] = meta.sample_duration_s;
    header["array"] = meta.array_label;
    header["scenario"] = to_string(meta.scenario);
    header["path"] = meta.path_label;
    header["k"] = meta.n_nodes;
    header["bs_height_m"] = meta.bs_height_m;
    header["ue_height_m"] = meta.ue_height_m;
    header["modulation"] = meta.modulation;
    return header;
}

/// Writes tensor + metadata as an MMK1 file. The metadata dimensions must
/// match the tensor so that load_dataset inverts this exactly.
inline void save_dataset(const ChannelTensor& tensor, const MeasurementMeta& meta,
                         const std::filesystem::path& path) {
    meta.validate();
    if (meta.n_snapshots != tensor.n_snapshots() ||
        meta.n_subcarriers_used != tensor.n_subcarriers() ||
        meta.n_bs_antennas != tensor.n_antennas()) {
        throw std::invalid_argument("save_dataset: metadata dimensions do not match tensor");
    }

    std::vector<char> payload;
    payload.reserve(tensor.size() * 8);
    for (const auto& sample : tensor.samples()) {
        const auto re = static_cast<float>(sample.real());
        const auto im = static_cast<float>(sample.imag());
        if (!std::isfinite(re) || !std::isfinite(im)) {
            throw std::invalid_argument("save_dataset: sample exceeds float32 range");
        }
        detail::append_f32_le(payload, re);
        detail::append_f32_le(payload, im);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("save_dataset: cannot open '" + path.string() +
                                 "' for writing");
    }
    out << mmk1_magic << '\n' << mmk1_header(tensor, meta).dump() << '\n';
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) {
        throw std::runtime_error("save_dataset: write failed for '" + path.string() + "'");
    }
}

/// Parses an MMK1 file back into (tensor, metadata).
[[nodiscard]] inline std::pair<ChannelTensor, MeasurementMeta>
load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_dataset: cannot open '" + path.string() + "'");
    }

    std::string magic;
    std::getline(in, magic);
    if (!magic.empty() && magic.back() == '\r') {
        magic.pop_back();
    }
    if (magic != mmk1_magic) {
        throw std::runtime_error("load_dataset: '" + path.string() + "': bad magic '" + magic +
                                 "', expected '" + mmk1_magic + "'");
    }

    std::string header_line;
    if (!std::getline(in, header_line)) {
        throw std::runtime_error("load_dataset: '" + path.string() + "': missing JSON header");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("load_dataset: '" + path.string() +
                                 "': header is not valid JSON: " + e.what());
    }
    if (!header.is_object()) {
        throw std::runtime_error("load_dataset: '" + path.string() +
                                 "': header must be a JSON object");
    }

    const std::size_t n = detail::require_count_key(header, "n");
    const std::size_t f = detail::require_count_key(header, "f");
    const std::size_t m = detail::require_count_key(header, "m");
    header.erase("n");
    header.erase("f");
    header.erase("m");

    MeasurementMeta meta;
    meta.n_snapshots = n;
    meta.n_subcarriers_used = f;
    meta.n_bs_antennas = m;
    meta.carrier_freq_hz = detail::take_number(header, "fc_hz", meta.carrier_freq_hz);
    meta.tx_power_dbm = detail::take_number(header, "tx_dbm", meta.tx_power_dbm);
    meta.sample_interval_s =
        detail::take_number(header, "sample_interval_s", meta.sample_interval_s);
    meta.sample_duration_s =
        detail::take_number(header, "sample_duration_s", meta.sample_duration_s);
    meta.array_label = detail::take_string(header, "array", meta.array_label);
    meta.scenario = scenario_from_string(detail::take_string(header, "scenario", "Unknown"));
    meta.path_label = detail::take_string(header, "path", "");
    {
        const auto it = header.find("k");
        if (it != header.end()) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
                throw std::runtime_error("MMK1 header: key 'k' must be an integer >= 1");
            }
            meta.n_nodes = it->get<std::size_t>();
            header.erase(it);
        }
    }
    meta.bs_height_m = detail::take_number(header, "bs_height_m", meta.bs_height_m);
    meta.ue_height_m = detail::take_number(header, "ue_height_m", meta.ue_height_m);
    meta.modulation = detail::take_string(header, "modulation", meta.modulation);
    meta.extra = std::move(header);

    const std::size_t expected_bytes = n * f * m * 8;
    std::vector<char> payload(expected_bytes);
    in.read(payload.data(), static_cast<std::streamsize>(expected_bytes));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got < expected_bytes) {
        throw std::runtime_error("load_dataset: '" + path.string() +
                                 "': payload size mismatch: expected " +
                                 std::to_string(expected_bytes) + " bytes, found " +
                                 std::to_string(got));
    }
    std::size_t trailing = 0;
    char scratch[4096];
    while (in.read(scratch, sizeof scratch) || in.gcount() > 0) {
        trailing += static_cast<std::size_t>(in.gcount());
        if (in.eof()) {
            break;
        }
    }
    if (trailing > 0) {
        throw std::runtime_error("load_dataset: '" + path.string() +
                                 "': payload size mismatch: expected " +
                                 std::to_string(expected_bytes) + " bytes, found " +
                                 std::to_string(expected_bytes + trailing));
    }

    std::vector<std::complex<double>> samples;
    samples.reserve(n * f * m);
    for (std::size_t i = 0; i < n * f * m; ++i) {
        const float re = detail::read_f32_le(payload.data() + i * 8);
        const float im = detail::read_f32_le(payload.data() + i * 8 + 4);
        if (!std::isfinite(re) || !std::isfinite(im)) {
            throw std::runtime_error("load_dataset: '" + path.string() +
                                     "': non-finite sample at flat index " + std::to_string(i));
        }
        samples.emplace_back(static_cast<double>(re), static_cast<double>(im));
    }

    return {ChannelTensor(n, f, m, std::move(samples), meta), std::move(meta)};
}

} // namespace submimo
