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

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace submimo {

inline constexpr double speed_of_light_m_s = 299792458.0;

enum class ArrayLayout { Ula, Ura };

/// Half-wavelength-pitch antenna array in the y-z plane, broadside along +x.
///
/// Element indexing follows the measurement convention: within a row the
/// index grows right to left, and rows are counted bottom to top, so
/// element m sits at (row = m / cols, col = m % cols). A ULA is the single
/// bottom row.
struct ArrayGeometry {
    ArrayLayout layout = ArrayLayout::Ula;
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::vector<std::array<double, 3>> element_positions; // meters
    double wavelength_m = 0.0;
    double element_gain_dbi = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return element_positions.size(); }

    /// Checks the grid invariants: element count and lambda/2 pitch between
    /// grid-adjacent elements (1e-9 m tolerance).
    void validate() const {
        if (element_positions.size() != rows * cols || rows < 1 || cols < 1) {
            throw std::invalid_argument("ArrayGeometry: element count does not match rows*cols");
        }
        if (!(wavelength_m > 0.0)) {
            throw std::invalid_argument("ArrayGeometry: wavelength must be positive");
        }
        const double pitch = wavelength_m / 2.0;
        auto distance = [this](std::size_t a, std::size_t b) {
            const auto& p = element_positions[a];
            const auto& q = element_positions[b];
            return std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
        };
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t m = r * cols + c;
                if (c + 1 < cols && std::abs(distance(m, m + 1) - pitch) > 1e-9) {
                    throw std::invalid_argument("ArrayGeometry: horizontal pitch off lambda/2 at element " +
                                                std::to_string(m));
                }
                if (r + 1 < rows && std::abs(distance(m, m + cols) - pitch) > 1e-9) {
                    throw std::invalid_argument("ArrayGeometry: vertical pitch off lambda/2 at element " +
                                                std::to_string(m));
                }
            }
        }
    }
};

/// Lays out `rows` x `cols` elements on a lambda/2 grid for the given
/// carrier. ULA requires rows == 1.
[[nodiscard]] inline ArrayGeometry build_array_geometry(ArrayLayout layout, std::size_t rows,
                                                        std::size_t cols, double carrier_freq_hz,
                                                        double element_gain_dbi) {
    if (!(carrier_freq_hz > 0.0) || !std::isfinite(carrier_freq_hz)) {
        throw std::invalid_argument("build_array_geometry: carrier frequency must be positive");
    }
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("build_array_geometry: dimensions must be >= 1");
    }
    if (layout == ArrayLayout::Ula && rows != 1) {
        throw std::invalid_argument("build_array_geometry: ULA must have a single row");
    }
    ArrayGeometry geom;
    geom.layout = layout;
    geom.rows = rows;
    geom.cols = cols;
    geom.wavelength_m = speed_of_light_m_s / carrier_freq_hz;
    geom.element_gain_dbi = element_gain_dbi;
    const double pitch = geom.wavelength_m / 2.0;
    geom.element_positions.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            geom.element_positions.push_back({0.0, static_cast<double>(c) * pitch,
                                              static_cast<double>(r) * pitch});
        }
    }
    return geom;
}

[[nodiscard]] inline ArrayGeometry build_ula(std::size_t n_elements, double carrier_freq_hz,
                                             double element_gain_dbi) {
    return build_array_geometry(ArrayLayout::Ula, 1, n_elements, carrier_freq_hz,
                                element_gain_dbi);
}

[[nodiscard]] inline ArrayGeometry build_ura(std::size_t rows, std::size_t cols,
                                             double carrier_freq_hz, double element_gain_dbi) {
    return build_array_geometry(ArrayLayout::Ura, rows, cols, carrier_freq_hz, element_gain_dbi);
}

} // namespace submimo
