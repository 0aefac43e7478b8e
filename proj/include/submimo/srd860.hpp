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
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace submimo {

// Regulatory model of the European short-range-device sub-GHz band:
// effective radiated power, duty cycle, occupied bandwidth, and the
// narrowband OFDM frame the uplink uses to stay inside those limits.

/// Gain of an ideal half-wave dipole over an isotropic radiator. ERP is
/// referenced to the dipole, so dBd = dBi - 2.15.
inline constexpr double dipole_gain_dbi = 2.15;

struct SrdBand {
    std::string band_id;
    double f_low_hz = 0.0;
    double f_high_hz = 0.0;
    double max_erp_dbm = 0.0;
    double max_duty_cycle = 1.0; // fraction of on-air time

    void validate() const {
        if (!(f_low_hz < f_high_hz) || !(f_low_hz > 0.0)) {
            throw std::invalid_argument("SrdBand '" + band_id + "': need 0 < f_low < f_high");
        }
        if (!std::isfinite(max_erp_dbm)) {
            throw std::invalid_argument("SrdBand '" + band_id + "': max ERP must be finite");
        }
        if (!(max_duty_cycle > 0.0) || max_duty_cycle > 1.0) {
            throw std::invalid_argument("SrdBand '" + band_id + "': duty cycle must be in (0, 1]");
        }
    }
};

/// Built-in band table. Band 54 (869.40-869.65 MHz) allows 27 dBm ERP and
/// a 10 % duty cycle, the most permissive sub-GHz tier.
[[nodiscard]] inline const std::vector<SrdBand>& builtin_bands() {
    static const std::vector<SrdBand> bands = {
        {"54", 869.40e6, 869.65e6, 27.0, 0.10},
    };
    return bands;
}

/// Additional bands from a JSON array of SrdBand records.
[[nodiscard]] inline std::vector<SrdBand> load_bands_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_bands_json: cannot open '" + path.string() + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("load_bands_json: '" + path.string() + "': " + e.what());
    }
    if (!doc.is_array()) {
        throw std::runtime_error("load_bands_json: '" + path.string() +
                                 "': expected a JSON array of band records");
    }
    std::vector<SrdBand> bands;
    bands.reserve(doc.size());
    for (const auto& record : doc) {
        SrdBand band;
        try {
            band.band_id = record.at("band_id").get<std::string>();
            band.f_low_hz = record.at("f_low_hz").get<double>();
            band.f_high_hz = record.at("f_high_hz").get<double>();
            band.max_erp_dbm = record.at("max_erp_dbm").get<double>();
            band.max_duty_cycle = record.at("max_duty_cycle").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("load_bands_json: '" + path.string() +
                                     "': bad band record: " + e.what());
        }
        band.validate();
        bands.push_back(std::move(band));
    }
    return bands;
}

/// Looks up a band by id; extra bands shadow the built-in table.
[[nodiscard]] inline SrdBand find_band(std::string_view band_id,
                                       std::span<const SrdBand> extra_bands = {}) {
    for (const auto& band : extra_bands) {
        if (band.band_id == band_id) {
            return band;
        }
    }
    for (const auto& band : builtin_bands()) {
        if (band.band_id == band_id) {
            return band;
        }
    }
    throw std::invalid_argument("unknown SRD band '" + std::string(band_id) + "'");
}

/// OFDM grid parameters. The default is the LTE-derived numerology with
/// only the middle 13 of 1200 subcarriers active, which keeps the occupied
/// bandwidth at 195 kHz.
struct Numerology {
    double subcarrier_spacing_hz = 15e3;
    std::size_t total_subcarriers = 1200;
    std::size_t active_subcarriers = 13;
    double symbol_duration_s = 1.0 / 15e3; // reciprocal of the spacing
    std::size_t subframes_per_frame = 10;
    std::size_t slots_per_subframe = 2;
    std::size_t symbols_per_slot = 7;

    [[nodiscard]] static Numerology lte_srd_default() { return Numerology{}; }

    [[nodiscard]] std::size_t symbols_per_frame() const noexcept {
        return subframes_per_frame * slots_per_subframe * symbols_per_slot;
    }

    /// LTE subframes are 1 ms, so the default 10-subframe frame lasts
    /// 10 ms; the 140 x 66.67 us symbol grid leaves an implicit silent
    /// guard at the end.
    [[nodiscard]] double frame_duration_s() const noexcept {
        return static_cast<double>(subframes_per_frame) * 1e-3;
    }

    void validate() const {
        if (!(subcarrier_spacing_hz > 0.0) || !(symbol_duration_s > 0.0)) {
            throw std::invalid_argument("Numerology: spacing and symbol duration must be positive");
        }
        if (active_subcarriers < 1 || total_subcarriers < 1 ||
            active_subcarriers > total_subcarriers) {
            throw std::invalid_argument("Numerology: need 1 <= active <= total subcarriers");
        }
        if (subframes_per_frame < 1 || slots_per_subframe < 1 || symbols_per_slot < 1) {
            throw std::invalid_argument("Numerology: frame layout counts must be >= 1");
        }
    }
};

/// ERP in dBm for an input power into an antenna of the given isotropic
/// gain: ERP = P_in + (G_dBi - 2.15).
[[nodiscard]] inline double erp_dbm(double p_in_dbm, double antenna_gain_dbi) {
    if (!std::isfinite(p_in_dbm) || !std::isfinite(antenna_gain_dbi)) {
        throw std::invalid_argument("erp_dbm: inputs must be finite");
    }
    return p_in_dbm + (antenna_gain_dbi - dipole_gain_dbi);
}

/// Occupied bandwidth of the active grid (no roll-off modeling).
[[nodiscard]] inline double occupied_bandwidth_hz(const Numerology& numerology) {
    numerology.validate();
    return static_cast<double>(numerology.active_subcarriers) * numerology.subcarrier_spacing_hz;
}

struct Interval {
    double start_s = 0.0;
    double duration_s = 0.0;
};

/// Worst-case duty cycle of a finite transmission schedule: the maximum
/// over all sliding windows of the given length of (on-time inside the
/// window) / window. Overlapping or touching intervals are merged first
/// (the regulator-favorable reading).
[[nodiscard]] inline double duty_cycle(std::vector<Interval> on_intervals,
                                       double observation_window_s) {
    if (!(observation_window_s > 0.0) || !std::isfinite(observation_window_s)) {
        throw std::invalid_argument("duty_cycle: observation window must be positive");
    }
    for (const auto& iv : on_intervals) {
        if (!(iv.duration_s >= 0.0) || !std::isfinite(iv.duration_s) ||
            !std::isfinite(iv.start_s)) {
            throw std::invalid_argument("duty_cycle: intervals need finite start and duration >= 0");
        }
    }
    std::erase_if(on_intervals, [](const Interval& iv) { return iv.duration_s == 0.0; });
    if (on_intervals.empty()) {
        return 0.0;
    }
    std::sort(on_intervals.begin(), on_intervals.end(),
              [](const Interval& a, const Interval& b) { return a.start_s < b.start_s; });

    // Merge into disjoint [start, end) spans.
    std::vector<double> starts;
    std::vector<double> ends;
    for (const auto& iv : on_intervals) {
        const double end = iv.start_s + iv.duration_s;
        if (!starts.empty() && iv.start_s <= ends.back()) {
            ends.back() = std::max(ends.back(), end);
        } else {
            starts.push_back(iv.start_s);
            ends.push_back(end);
        }
    }

    std::vector<double> prefix(starts.size() + 1, 0.0);
    for (std::size_t i = 0; i < starts.size(); ++i) {
        prefix[i + 1] = prefix[i] + (ends[i] - starts[i]);
    }

    // On-time inside [t, t + window].
    const double window = observation_window_s;
    auto coverage = [&](double t) {
        const double lo = t;
        const double hi = t + window;
        // First span that ends after lo, last span that starts before hi.
        const auto first = static_cast<std::size_t>(
            std::upper_bound(ends.begin(), ends.end(), lo) - ends.begin());
        const auto last_plus = static_cast<std::size_t>(
            std::lower_bound(starts.begin(), starts.end(), hi) - starts.begin());
        if (first >= last_plus) {
            return 0.0;
        }
        double on = prefix[last_plus] - prefix[first];
        if (starts[first] < lo) {
            on -= lo - starts[first];
        }
        if (ends[last_plus - 1] > hi) {
            on -= ends[last_plus - 1] - hi;
        }
        return on;
    };

    // The objective is piecewise linear in t; maxima occur when the window
    // start hits a span start or the window end hits a span end.
    double best = 0.0;
    for (double s : starts) {
        best = std::max(best, coverage(s));
    }
    for (double e : ends) {
        best = std::max(best, coverage(e - window));
    }
    return best / window;
}

enum class SymbolRole { Pilot, UplinkData, Silent };

/// Role assignment rule for the symbols of one frame.
struct FramePattern {
    enum class Preset {
        UplinkPilotData, ///< symbol 0 pilot, symbols 1-2 uplink data, rest silent
        AllSilent,
        AllActive, ///< symbol 0 pilot, every other symbol uplink data
        Custom,
    };

    Preset preset = Preset::UplinkPilotData;
    std::vector<std::pair<std::size_t, SymbolRole>> assignments; // Custom only

    [[nodiscard]] static FramePattern uplink_default() { return {Preset::UplinkPilotData, {}}; }
    [[nodiscard]] static FramePattern all_silent() { return {Preset::AllSilent, {}}; }
    [[nodiscard]] static FramePattern all_active() { return {Preset::AllActive, {}}; }
    [[nodiscard]] static FramePattern
    custom(std::vector<std::pair<std::size_t, SymbolRole>> assignments) {
        return {Preset::Custom, std::move(assignments)};
    }
};

/// One frame's symbol roles on the fixed 10 ms grid.
struct FramePlan {
    std::vector<SymbolRole> symbol_roles;
    double frame_duration_s = 10e-3;
    double symbol_duration_s = 1.0 / 15e3;

    [[nodiscard]] std::size_t active_symbols() const noexcept {
        std::size_t count = 0;
        for (const auto role : symbol_roles) {
            if (role != SymbolRole::Silent) {
                ++count;
            }
        }
        return count;
    }

    /// Transmit intervals of this frame (symbol grid positions of the
    /// non-silent symbols).
    [[nodiscard]] std::vector<Interval> on_intervals() const {
        std::vector<Interval> intervals;
        for (std::size_t i = 0; i < symbol_roles.size(); ++i) {
            if (symbol_roles[i] != SymbolRole::Silent) {
                intervals.push_back({static_cast<double>(i) * symbol_duration_s,
                                     symbol_duration_s});
            }
        }
        return intervals;
    }

    /// Duty cycle of the periodic schedule, evaluated analytically over
    /// one period: on-time per frame / frame duration.
    [[nodiscard]] double duty_cycle() const noexcept {
        return static_cast<double>(active_symbols()) * symbol_duration_s / frame_duration_s;
    }

    void validate() const {
        if (symbol_roles.empty() || !(frame_duration_s > 0.0) || !(symbol_duration_s > 0.0)) {
            throw std::invalid_argument("FramePlan: empty frame or non-positive durations");
        }
        bool has_pilot = false;
        bool has_data = false;
        for (const auto role : symbol_roles) {
            has_pilot = has_pilot || role == SymbolRole::Pilot;
            has_data = has_data || role == SymbolRole::UplinkData;
        }
        if (has_data && !has_pilot) {
            throw std::invalid_argument("FramePlan: uplink data requires at least one pilot");
        }
        if (static_cast<double>(symbol_roles.size()) * symbol_duration_s >
            frame_duration_s * (1.0 + 1e-12)) {
            throw std::invalid_argument("FramePlan: symbol grid exceeds frame duration");
        }
    }
};

/// Lays the pattern onto the numerology's symbol grid.
[[nodiscard]] inline FramePlan build_frame(const Numerology& numerology,
                                           const FramePattern& pattern) {
    numerology.validate();
    const std::size_t n_symbols = numerology.symbols_per_frame();
    FramePlan plan;
    plan.symbol_roles.assign(n_symbols, SymbolRole::Silent);
    plan.frame_duration_s = numerology.frame_duration_s();
    plan.symbol_duration_s = numerology.symbol_duration_s;

    switch (pattern.preset) {
    case FramePattern::Preset::UplinkPilotData:
        if (n_symbols < 3) {
            throw std::invalid_argument("build_frame: default pattern needs >= 3 symbols");
        }
        plan.symbol_roles[0] = SymbolRole::Pilot;
        plan.symbol_roles[1] = SymbolRole::UplinkData;
        plan.symbol_roles[2] = SymbolRole::UplinkData;
        break;
    case FramePattern::Preset::AllSilent:
        break;
    case FramePattern::Preset::AllActive:
        plan.symbol_roles.assign(n_symbols, SymbolRole::UplinkData);
        plan.symbol_roles[0] = SymbolRole::Pilot;
        break;
    case FramePattern::Preset::Custom:
        for (const auto& [index, role] : pattern.assignments) {
            if (index >= n_symbols) {
                throw std::invalid_argument("build_frame: symbol index " + std::to_string(index) +
                                            " beyond frame length " + std::to_string(n_symbols));
            }
            plan.symbol_roles[index] = role;
        }
        break;
    }
    plan.validate();
    return plan;
}

/// Pass/fail per regulatory limit, with signed margins (positive = inside
/// the limit). `overall` is the conjunction of the four checks.
struct ComplianceReport {
    bool erp_ok = false;
    double erp_value_dbm = 0.0;
    double erp_margin_db = 0.0;

    bool duty_cycle_ok = false;
    double duty_cycle_value = 0.0;
    double duty_cycle_margin = 0.0;

    bool bandwidth_ok = false;
    double occupied_bandwidth_value_hz = 0.0;
    double bandwidth_margin_hz = 0.0;

    bool carrier_in_band = false;
    double carrier_margin_hz = 0.0;

    bool overall = false;
};

/// Checks one uplink configuration against a band's limits. Failures are
/// report fields, not errors.
[[nodiscard]] inline ComplianceReport check_compliance(const SrdBand& band, double carrier_hz,
                                                       const Numerology& numerology,
                                                       const FramePlan& frame, double p_in_dbm,
                                                       double antenna_gain_dbi) {
    band.validate();
    frame.validate();
    if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz)) {
        throw std::invalid_argument("check_compliance: carrier frequency must be positive");
    }

    ComplianceReport report;
    report.erp_value_dbm = erp_dbm(p_in_dbm, antenna_gain_dbi);
    report.erp_margin_db = band.max_erp_dbm - report.erp_value_dbm;
    report.erp_ok = report.erp_value_dbm <= band.max_erp_dbm;

    report.duty_cycle_value = frame.duty_cycle();
    report.duty_cycle_margin = band.max_duty_cycle - report.duty_cycle_value;
    report.duty_cycle_ok = report.duty_cycle_value <= band.max_duty_cycle;

    report.occupied_bandwidth_value_hz = occupied_bandwidth_hz(numerology);
    const double lower_edge = carrier_hz - report.occupied_bandwidth_value_hz / 2.0;
    const double upper_edge = carrier_hz + report.occupied_bandwidth_value_hz / 2.0;
    report.bandwidth_margin_hz =
        std::min(lower_edge - band.f_low_hz, band.f_high_hz - upper_edge);
    report.bandwidth_ok = lower_edge >= band.f_low_hz && upper_edge <= band.f_high_hz;

    report.carrier_margin_hz = std::min(carrier_hz - band.f_low_hz, band.f_high_hz - carrier_hz);
    report.carrier_in_band = carrier_hz >= band.f_low_hz && carrier_hz <= band.f_high_hz;

    report.overall = report.erp_ok && report.duty_cycle_ok && report.bandwidth_ok &&
                     report.carrier_in_band;
    return report;
}

} // namespace submimo
