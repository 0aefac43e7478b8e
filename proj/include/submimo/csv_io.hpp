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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "submimo/channel_tensor.hpp"

namespace submimo {

namespace detail {

/// Shortest decimal form that reparses to the identical double.
[[nodiscard]] inline std::string format_double(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, end);
}

[[nodiscard]] inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

[[nodiscard]] inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(pos)));
            return fields;
        }
        fields.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
}

[[nodiscard]] inline std::size_t parse_index(std::string_view field, const std::string& context) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error(context + ": invalid index '" + std::string(field) + "'");
    }
    return value;
}

[[nodiscard]] inline double parse_double(std::string_view field, const std::string& context) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error(context + ": invalid number '" + std::string(field) + "'");
    }
    return value;
}

} // namespace detail

/// Reads a `n,f,m,re,im` CSV (zero-based indices) into a tensor of the
/// given dimensions. Every cell must appear exactly once.
[[nodiscard]] inline ChannelTensor import_csv(const std::filesystem::path& path, std::size_t n,
                                              std::size_t f, std::size_t m) {
    if (n < 1 || f < 1 || m < 1) {
        throw std::invalid_argument("import_csv: dimensions must be >= 1");
    }
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("import_csv: cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "n,f,m,re,im") {
        throw std::runtime_error("import_csv: '" + path.string() +
                                 "': expected header 'n,f,m,re,im'");
    }

    std::vector<std::complex<double>> samples(n * f * m);
    std::vector<char> seen(n * f * m, 0);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const std::string context =
            "import_csv: '" + path.string() + "' line " + std::to_string(line_no);
        const auto fields = detail::split_fields(line);
        if (fields.size() != 5) {
            throw std::runtime_error(context + ": expected 5 fields, found " +
                                     std::to_string(fields.size()));
        }
        const std::size_t in_ = detail::parse_index(fields[0], context);
        const std::size_t if_ = detail::parse_index(fields[1], context);
        const std::size_t im_ = detail::parse_index(fields[2], context);
        if (in_ >= n || if_ >= f || im_ >= m) {
            throw std::runtime_error(context + ": cell (" + std::to_string(in_) + "," +
                                     std::to_string(if_) + "," + std::to_string(im_) +
                                     ") outside declared dimensions");
        }
        const std::size_t flat = (in_ * f + if_) * m + im_;
        if (seen[flat]) {
            throw std::runtime_error(context + ": duplicate cell (" + std::to_string(in_) + "," +
                                     std::to_string(if_) + "," + std::to_string(im_) + ")");
        }
        seen[flat] = 1;
        samples[flat] = {detail::parse_double(fields[3], context),
                         detail::parse_double(fields[4], context)};
    }

    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            const std::size_t in_ = i / (f * m);
            const std::size_t if_ = (i / m) % f;
            const std::size_t im_ = i % m;
            throw std::runtime_error("import_csv: '" + path.string() + "': missing cell (" +
                                     std::to_string(in_) + "," + std::to_string(if_) + "," +
                                     std::to_string(im_) + ")");
        }
    }
    return ChannelTensor(n, f, m, std::move(samples));
}

/// Writes a tensor as `n,f,m,re,im` rows in [n][f][m] order. Values keep
/// full double precision, so import_csv inverts this exactly.
inline void export_csv(const ChannelTensor& tensor, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("export_csv: cannot open '" + path.string() + "' for writing");
    }
    out << "n,f,m,re,im\n";
    for (std::size_t n = 0; n < tensor.n_snapshots(); ++n) {
        for (std::size_t f = 0; f < tensor.n_subcarriers(); ++f) {
            for (std::size_t m = 0; m < tensor.n_antennas(); ++m) {
                const auto& s = tensor.at(n, f, m);
                out << n << ',' << f << ',' << m << ',' << detail::format_double(s.real())
                    << ',' << detail::format_double(s.imag()) << '\n';
            }
        }
    }
    if (!out) {
        throw std::runtime_error("export_csv: write failed for '" + path.string() + "'");
    }
}

/// Reads an `antenna,gain_db` CSV into a GainProfile. Rows must cover
/// antennas 0..M-1 in order.
[[nodiscard]] inline GainProfile read_gain_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_gain_csv: cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "antenna,gain_db") {
        throw std::runtime_error("read_gain_csv: '" + path.string() +
                                 "': expected header 'antenna,gain_db'");
    }
    GainProfile profile;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const std::string context =
            "read_gain_csv: '" + path.string() + "' line " + std::to_string(line_no);
        const auto fields = detail::split_fields(line);
        if (fields.size() != 2) {
            throw std::runtime_error(context + ": expected 2 fields");
        }
        const std::size_t antenna = detail::parse_index(fields[0], context);
        if (antenna != profile.per_antenna_gain_db.size()) {
            throw std::runtime_error(context + ": antennas must be consecutive from 0");
        }
        profile.per_antenna_gain_db.push_back(detail::parse_double(fields[1], context));
    }
    if (profile.per_antenna_gain_db.empty()) {
        throw std::runtime_error("read_gain_csv: '" + path.string() + "': no data rows");
    }
    profile.n_antennas = profile.per_antenna_gain_db.size();
    profile.validate();
    return profile;
}

inline void write_gain_csv(const GainProfile& profile, std::ostream& out) {
    out << "antenna,gain_db\n";
    for (std::size_t m = 0; m < profile.per_antenna_gain_db.size(); ++m) {
        out << m << ',' << detail::format_double(profile.per_antenna_gain_db[m]) << '\n';
    }
}

} // namespace submimo
