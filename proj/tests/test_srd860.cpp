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

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <limits>

#include "submimo/srd860.hpp"

using namespace submimo;

TEST_CASE("erp_dbm - dipole reference arithmetic")
{
    // An ideal half-wave dipole is the 0 dBd reference.
    CHECK(erp_dbm(20.0, 2.15) == Catch::Approx(20.0).margin(1e-12));
    CHECK(erp_dbm(0.0, 2.15) == Catch::Approx(0.0).margin(1e-12));
    // 22.6 dBm into the 5.9 dBi patch.
    CHECK(erp_dbm(22.6, 5.9) == Catch::Approx(26.35).margin(1e-12));
}

TEST_CASE("erp_dbm - monotone in both arguments")
{
    for (double p = -10.0; p <= 30.0; p += 7.5) {
        CHECK(erp_dbm(p + 1.0, 3.0) > erp_dbm(p, 3.0));
        CHECK(erp_dbm(p, 4.0) > erp_dbm(p, 3.0));
        CHECK(erp_dbm(p, 2.15) == p);
    }
    CHECK_THROWS_AS(erp_dbm(std::numeric_limits<double>::quiet_NaN(), 0.0),
                    std::invalid_argument);
}

TEST_CASE("duty_cycle - trivial schedules")
{
    CHECK(duty_cycle({}, 1.0) == 0.0);
    CHECK(duty_cycle({{0.0, 1.0}}, 1.0) == Catch::Approx(1.0).margin(1e-15));
    // Continuously on across many windows.
    CHECK(duty_cycle({{0.0, 3600.0}}, 3600.0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("duty_cycle - three symbols per 10 ms frame give 2 %")
{
    const double symbol = 1.0 / 15e3;
    const std::vector<Interval> frame = {{0.0, symbol}, {symbol, symbol}, {2 * symbol, symbol}};
    CHECK(duty_cycle(frame, 10e-3) == Catch::Approx(0.02).margin(1e-9));
}

TEST_CASE("duty_cycle - invariant to splitting an interval")
{
    const std::vector<Interval> whole = {{0.5, 0.3}};
    std::vector<Interval> split;
    for (int i = 0; i < 10; ++i) {
        split.push_back({0.5 + 0.03 * i, 0.03});
    }
    CHECK(duty_cycle(split, 2.0) == Catch::Approx(duty_cycle(whole, 2.0)).margin(1e-12));
}

TEST_CASE("duty_cycle - periodic schedules measure the same over k periods")
{
    const double symbol = 1.0 / 15e3;
    const double period = 10e-3;
    std::vector<Interval> one_period = {{0.0, symbol}, {symbol, symbol}, {2 * symbol, symbol}};
    const double single = duty_cycle(one_period, period);

    std::vector<Interval> many;
    for (int k = 0; k < 25; ++k) {
        for (const auto& iv : one_period) {
            many.push_back({iv.start_s + k * period, iv.duration_s});
        }
    }
    // Window of one period sliding over many periods, and window of k periods.
    CHECK(duty_cycle(many, period) == Catch::Approx(single).margin(1e-9));
    CHECK(duty_cycle(many, 25 * period) == Catch::Approx(single).margin(1e-9));
}

TEST_CASE("duty_cycle - the worst window is found, not the average")
{
    // Two bursts close together; a window covering both is the worst case.
    const std::vector<Interval> bursts = {{0.0, 0.1}, {0.2, 0.1}};
    CHECK(duty_cycle(bursts, 0.3) == Catch::Approx(0.2 / 0.3).margin(1e-12));
    CHECK(duty_cycle(bursts, 10.0) == Catch::Approx(0.02).margin(1e-12));
    // A window shorter than one burst is fully occupied.
    CHECK(duty_cycle(bursts, 0.05) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("duty_cycle - overlapping intervals are merged")
{
    const std::vector<Interval> overlapping = {{0.0, 2.0}, {1.0, 2.0}};
    CHECK(duty_cycle(overlapping, 10.0) == Catch::Approx(0.3).margin(1e-12));
}

TEST_CASE("duty_cycle - argument validation")
{
    CHECK_THROWS_AS(duty_cycle({{0.0, -1.0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(duty_cycle({{0.0, 1.0}}, 0.0), std::invalid_argument);
}

TEST_CASE("occupied_bandwidth - active subcarriers times spacing")
{
    const auto numerology = Numerology::lte_srd_default();
    CHECK(occupied_bandwidth_hz(numerology) == 195000.0);

    Numerology narrow = numerology;
    narrow.active_subcarriers = 1;
    CHECK(occupied_bandwidth_hz(narrow) == 15000.0);

    Numerology full = numerology;
    full.active_subcarriers = 1200;
    CHECK(occupied_bandwidth_hz(full) == 18e6);
}

TEST_CASE("Numerology - default grid and validation")
{
    const auto numerology = Numerology::lte_srd_default();
    CHECK(numerology.symbols_per_frame() == 140);
    CHECK(numerology.frame_duration_s() == Catch::Approx(10e-3).margin(1e-15));
    CHECK_NOTHROW(numerology.validate());

    Numerology bad = numerology;
    bad.active_subcarriers = 2000;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("build_frame - default pattern: pilot + two data symbols, 2 % duty cycle")
{
    const auto numerology = Numerology::lte_srd_default();
    const auto frame = build_frame(numerology, FramePattern::uplink_default());
    REQUIRE(frame.symbol_roles.size() == 140);
    CHECK(frame.symbol_roles[0] == SymbolRole::Pilot);
    CHECK(frame.symbol_roles[1] == SymbolRole::UplinkData);
    CHECK(frame.symbol_roles[2] == SymbolRole::UplinkData);
    for (std::size_t i = 3; i < frame.symbol_roles.size(); ++i) {
        CHECK(frame.symbol_roles[i] == SymbolRole::Silent);
    }
    CHECK(frame.duty_cycle() == Catch::Approx(0.02).margin(1e-9));

    // The sliding-window evaluation agrees with the analytic one.
    CHECK(duty_cycle(frame.on_intervals(), frame.frame_duration_s) ==
          Catch::Approx(0.02).margin(1e-9));
}

TEST_CASE("build_frame - all-silent and all-active patterns")
{
    const auto numerology = Numerology::lte_srd_default();
    const auto silent = build_frame(numerology, FramePattern::all_silent());
    CHECK(silent.duty_cycle() == 0.0);

    const auto active = build_frame(numerology, FramePattern::all_active());
    CHECK(active.active_symbols() == 140);
    CHECK(active.duty_cycle() == Catch::Approx(14.0 / 15.0).margin(1e-12));
    CHECK(active.duty_cycle() == Catch::Approx(0.933).margin(1e-3));
}

TEST_CASE("build_frame - custom assignments and bounds")
{
    const auto numerology = Numerology::lte_srd_default();
    const auto frame = build_frame(
        numerology, FramePattern::custom({{0, SymbolRole::Pilot}, {70, SymbolRole::UplinkData}}));
    CHECK(frame.symbol_roles[70] == SymbolRole::UplinkData);
    CHECK(frame.active_symbols() == 2);

    CHECK_THROWS_AS(build_frame(numerology,
                                FramePattern::custom({{140, SymbolRole::Pilot}})),
                    std::invalid_argument);
    // Uplink data without any pilot violates the frame invariant.
    CHECK_THROWS_AS(build_frame(numerology,
                                FramePattern::custom({{5, SymbolRole::UplinkData}})),
                    std::invalid_argument);
}

TEST_CASE("check_compliance - the campaign configuration passes band 54")
{
    const auto band = find_band("54");
    const auto numerology = Numerology::lte_srd_default();
    const auto frame = build_frame(numerology, FramePattern::uplink_default());
    const auto report = check_compliance(band, 869.525e6, numerology, frame, 22.6, 5.9);

    CHECK(report.overall);
    CHECK(report.erp_ok);
    CHECK(report.erp_value_dbm == Catch::Approx(26.35).margin(1e-12));
    CHECK(report.erp_margin_db == Catch::Approx(0.65).margin(1e-12));
    CHECK(report.duty_cycle_ok);
    CHECK(report.duty_cycle_margin == Catch::Approx(0.08).margin(1e-9));
    CHECK(report.bandwidth_ok);
    CHECK(report.occupied_bandwidth_value_hz == 195000.0);
    CHECK(report.bandwidth_margin_hz == Catch::Approx(27500.0).margin(1e-6));
    CHECK(report.carrier_in_band);
    CHECK(report.carrier_margin_hz == Catch::Approx(125000.0).margin(1e-6));
}

TEST_CASE("check_compliance - over-the-limit input power fails the ERP check")
{
    const auto band = find_band("54");
    const auto numerology = Numerology::lte_srd_default();
    const auto frame = build_frame(numerology, FramePattern::uplink_default());
    const auto report = check_compliance(band, 869.525e6, numerology, frame, 28.0, 5.9);

    CHECK_FALSE(report.erp_ok);
    CHECK(report.erp_value_dbm == Catch::Approx(31.75).margin(1e-12));
    CHECK(report.erp_margin_db == Catch::Approx(27.0 - (28.0 + 3.75)).margin(1e-12));
    CHECK_FALSE(report.overall);
    // overall is the conjunction of the four component flags
    CHECK(report.overall == (report.erp_ok && report.duty_cycle_ok && report.bandwidth_ok &&
                             report.carrier_in_band));
}

TEST_CASE("check_compliance - carrier too close to the band edge")
{
    const auto band = find_band("54");
    const auto numerology = Numerology::lte_srd_default();
    const auto frame = build_frame(numerology, FramePattern::uplink_default());
    const auto report = check_compliance(band, 869.60e6, numerology, frame, 22.6, 5.9);

    CHECK(report.carrier_in_band);
    CHECK_FALSE(report.bandwidth_ok); // upper edge 869.6975 MHz > 869.65 MHz
    CHECK(report.bandwidth_margin_hz == Catch::Approx(-47500.0).margin(1e-6));
    CHECK_FALSE(report.overall);
}

TEST_CASE("band table - builtin band 54 and JSON extras")
{
    const auto band = find_band("54");
    CHECK(band.f_low_hz == 869.40e6);
    CHECK(band.f_high_hz == 869.65e6);
    CHECK(band.max_erp_dbm == 27.0);
    CHECK(band.max_duty_cycle == 0.10);

    CHECK_THROWS_AS(find_band("nonexistent"), std::invalid_argument);

    const auto path = std::filesystem::temp_directory_path() / "submimo_bands.json";
    {
        std::ofstream out(path);
        out << R"([{"band_id":"48","f_low_hz":868.0e6,"f_high_hz":868.6e6,)"
            << R"("max_erp_dbm":14.0,"max_duty_cycle":0.01}])";
    }
    const auto extras = load_bands_json(path);
    REQUIRE(extras.size() == 1);
    const auto band48 = find_band("48", extras);
    CHECK(band48.max_erp_dbm == 14.0);

    // extras shadow the builtin table
    const std::vector<SrdBand> shadow = {{"54", 869.40e6, 869.65e6, 20.0, 0.10}};
    CHECK(find_band("54", shadow).max_erp_dbm == 20.0);
}

TEST_CASE("band table - malformed JSON records are rejected")
{
    const auto path = std::filesystem::temp_directory_path() / "submimo_bad_bands.json";
    {
        std::ofstream out(path);
        out << R"([{"band_id":"x"}])";
    }
    CHECK_THROWS_WITH(load_bands_json(path), Catch::Matchers::ContainsSubstring("band record"));

    {
        std::ofstream out(path);
        out << R"({"not":"an array"})";
    }
    CHECK_THROWS_WITH(load_bands_json(path), Catch::Matchers::ContainsSubstring("array"));
}
