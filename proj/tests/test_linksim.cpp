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

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "submimo/linksim.hpp"
#include "submimo/synth.hpp"

using namespace submimo;

namespace {

double mean_of(std::span<const double> values)
{
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

double std_of(std::span<const double> values)
{
    const double mean = mean_of(values);
    double acc = 0.0;
    for (const double v : values) {
        acc += (v - mean) * (v - mean);
    }
    return std::sqrt(acc / static_cast<double>(values.size()));
}

} // namespace

TEST_CASE("mrc_snr - hand values")
{
    const std::vector<std::complex<double>> single = {{1.0, 0.0}};
    CHECK(mrc_snr(single, 0.0, -100.0) == Catch::Approx(100.0).margin(1e-12));

    const std::vector<std::complex<double>> array(32, {1.0, 0.0});
    const double gain = mrc_snr(array, 0.0, -100.0) - mrc_snr(single, 0.0, -100.0);
    CHECK(gain == Catch::Approx(10.0 * std::log10(32.0)).margin(1e-12));
    CHECK(gain == Catch::Approx(15.051).margin(1e-3));
}

TEST_CASE("mrc_snr - matches a direct norm computation")
{
    rng::Stream stream(rng::key(2, 0x11ULL));
    std::vector<std::complex<double>> h(16);
    for (auto& v : h) {
        v = stream.next_cn01();
    }
    double norm_sq = 0.0;
    for (const auto& v : h) {
        norm_sq += v.real() * v.real() + v.imag() * v.imag();
    }
    const double expected = 14.0 - (-120.0) + 10.0 * std::log10(norm_sq);
    CHECK(std::abs(mrc_snr(h, 14.0, -120.0) - expected) < 1e-9);

    const std::vector<std::complex<double>> zero(4, {0.0, 0.0});
    CHECK_THROWS_AS(mrc_snr(zero, 0.0, -100.0), std::invalid_argument);
}

TEST_CASE("noise_power_dbm - thermal noise over a bandwidth")
{
    CHECK(noise_power_dbm(195000.0, 6.0) ==
          Catch::Approx(-174.0 + 10.0 * std::log10(195000.0) + 6.0).margin(1e-12));
    CHECK_THROWS_AS(noise_power_dbm(0.0, 3.0), std::invalid_argument);
}

TEST_CASE("simulate_uplink - constant tensor offsets and determinism")
{
    const auto tensor = ChannelTensor::filled(100, 2, 32, {1.0, 0.0});
    LinkBudget budget;
    budget.tx_power_dbm = 10.0;
    budget.noise_power_dbm = -110.0;

    const auto full = simulate_uplink(tensor, budget, Combiner::mrc(32));
    const auto single = simulate_uplink(tensor, budget, Combiner::single(0));
    REQUIRE(full.snr_db.size() == 100);
    for (std::size_t n = 0; n < 100; ++n) {
        CHECK(full.snr_db[n] - single.snr_db[n] ==
              Catch::Approx(10.0 * std::log10(32.0)).margin(1e-12));
    }
    CHECK(full.combiner_label == "mrc(32)");
    CHECK(single.combiner_label == "single(0)");

    const auto again = simulate_uplink(tensor, budget, Combiner::mrc(32));
    CHECK(again.snr_db == full.snr_db);
}

TEST_CASE("simulate_uplink - Mrc(1) equals SingleAntenna(0) exactly")
{
    const auto tensor = gen_iid_rayleigh(500, 2, 4, 77);
    LinkBudget budget;
    const auto mrc1 = simulate_uplink(tensor, budget, Combiner::mrc(1));
    const auto single0 = simulate_uplink(tensor, budget, Combiner::single(0));
    REQUIRE(mrc1.snr_db.size() == single0.snr_db.size());
    for (std::size_t n = 0; n < mrc1.snr_db.size(); ++n) {
        CHECK(mrc1.snr_db[n] == single0.snr_db[n]);
    }
}

TEST_CASE("simulate_uplink - invalid antenna index")
{
    const auto tensor = gen_iid_rayleigh(4, 1, 4, 1);
    LinkBudget budget;
    CHECK_THROWS_AS(simulate_uplink(tensor, budget, Combiner::single(4)), std::invalid_argument);
    CHECK_THROWS_AS(simulate_uplink(tensor, budget, Combiner::mrc(5)), std::invalid_argument);
}

TEST_CASE("simulate_uplink - hardening shrinks the dB-domain spread")
{
    const auto tensor = gen_iid_rayleigh(10000, 1, 32, 1234);
    LinkBudget budget;
    const auto full = simulate_uplink(tensor, budget, Combiner::mrc(32));
    const auto single = simulate_uplink(tensor, budget, Combiner::single(0));
    CHECK(std_of(full.snr_db) / std_of(single.snr_db) < 0.25);
}

TEST_CASE("simulate_uplink - a constant power shift moves every point by that much")
{
    const auto tensor = gen_iid_rayleigh(200, 2, 8, 4);
    LinkBudget low;
    low.tx_power_dbm = 3.0;
    LinkBudget high;
    high.tx_power_dbm = 3.0 + 7.25;
    const auto a = simulate_uplink(tensor, low, Combiner::mrc(8));
    const auto b = simulate_uplink(tensor, high, Combiner::mrc(8));
    for (std::size_t n = 0; n < a.snr_db.size(); ++n) {
        CHECK(b.snr_db[n] - a.snr_db[n] == Catch::Approx(7.25).margin(1e-12));
    }
}

TEST_CASE("outage_probability - trivial and exponential cases")
{
    SnrSeries series;
    series.snr_db = {10.0, 11.0, 12.0};
    CHECK(outage_probability(series, 5.0) == 0.0);
    CHECK(outage_probability(series, 20.0) == 1.0);

    // Single-antenna Rayleigh: |h|^2 ~ exp(1); the outage at the mean-SNR
    // target is Pr[exp(1) < 1] = 1 - exp(-1).
    const auto tensor = gen_iid_rayleigh(10000, 1, 1, 606);
    LinkBudget budget;
    const auto snr = simulate_uplink(tensor, budget, Combiner::single(0));
    const double mean_snr_db =
        budget.tx_power_dbm - budget.noise_power_dbm + 0.0; // E|h|^2 = 1 -> 0 dB
    const double outage = outage_probability(snr, mean_snr_db);
    CHECK(outage == Catch::Approx(1.0 - std::exp(-1.0)).margin(0.02));
}

TEST_CASE("required_tx_power - deterministic channel needs exactly S + N0")
{
    const auto tensor = ChannelTensor::filled(100, 1, 1, {1.0, 0.0});
    LinkBudget budget;
    budget.noise_power_dbm = -100.0;
    const double power =
        required_tx_power(tensor, budget, Combiner::single(0), 10.0, 0.01);
    CHECK(power == Catch::Approx(10.0 + (-100.0)).margin(1e-12));

    // Achievability: simulating at that power meets the outage target.
    LinkBudget at_power = budget;
    at_power.tx_power_dbm = power;
    const auto series = simulate_uplink(tensor, at_power, Combiner::single(0));
    CHECK(outage_probability(series, 10.0) <= 0.01);
}

TEST_CASE("required_tx_power - median-outage Rayleigh matches the ln 2 quantile")
{
    const auto tensor = gen_iid_rayleigh(10000, 1, 1, 909);
    LinkBudget budget;
    budget.noise_power_dbm = -100.0;
    const double power = required_tx_power(tensor, budget, Combiner::single(0), 10.0, 0.5);
    const double expected = 10.0 + (-100.0) - 10.0 * std::log10(std::log(2.0));
    CHECK(power == Catch::Approx(expected).margin(0.2));
}

TEST_CASE("required_tx_power - minimality and monotonicity in the antenna count")
{
    const auto tensor = gen_iid_rayleigh(5000, 1, 8, 4242);
    LinkBudget budget;
    budget.noise_power_dbm = -120.0;

    double previous = std::numeric_limits<double>::infinity();
    for (const std::size_t m : {1u, 2u, 4u, 8u}) {
        const double power = required_tx_power(tensor, budget, Combiner::mrc(m), 5.0, 0.05);
        CHECK(power <= previous);
        previous = power;

        // The returned power is the boundary: a hair above it the target
        // is met, 0.02 dB below it is missed. (Probing exactly at the
        // boundary is FP-ambiguous for the quantile realization itself.)
        LinkBudget at_power = budget;
        at_power.tx_power_dbm = power + 1e-9;
        const auto series = simulate_uplink(tensor, at_power, Combiner::mrc(m));
        CHECK(outage_probability(series, 5.0) <= 0.05);

        at_power.tx_power_dbm = power - 0.02;
        const auto below = simulate_uplink(tensor, at_power, Combiner::mrc(m));
        CHECK(outage_probability(below, 5.0) > 0.05);
    }
}

TEST_CASE("required_tx_power - unattainable target")
{
    const auto zero_then_one = ChannelTensor(
        4, 1, 1,
        {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
    LinkBudget budget;
    // 1 % outage cannot be met when 3 of 4 snapshots carry no power.
    CHECK_THROWS_AS(required_tx_power(zero_then_one, budget, Combiner::single(0), 0.0, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(required_tx_power(zero_then_one, budget, Combiner::single(0), 0.0, 1.5),
                    std::invalid_argument);
}

TEST_CASE("estimate_channel_ls - exact inversion and noise scaling")
{
    const std::complex<double> pilot{0.6, -0.8}; // |p| = 1
    rng::Stream stream(rng::key(31, 0x7fULL));
    std::vector<std::complex<double>> h(8);
    for (auto& v : h) {
        v = stream.next_cn01();
    }

    // Noiseless: y = h * p inverts exactly.
    std::vector<std::complex<double>> rx(8);
    for (std::size_t m = 0; m < 8; ++m) {
        rx[m] = h[m] * pilot;
    }
    const auto estimate = estimate_channel_ls(rx, pilot);
    for (std::size_t m = 0; m < 8; ++m) {
        CHECK(std::abs(estimate[m] - h[m]) < 1e-12);
    }

    // Unit pilot: h_hat = h + w.
    const std::complex<double> w{0.1, -0.2};
    std::vector<std::complex<double>> noisy(8);
    for (std::size_t m = 0; m < 8; ++m) {
        noisy[m] = h[m] + w;
    }
    const auto unit_est = estimate_channel_ls(noisy, {1.0, 0.0});
    for (std::size_t m = 0; m < 8; ++m) {
        CHECK(std::abs(unit_est[m] - (h[m] + w)) < 1e-15);
    }

    CHECK_THROWS_AS(estimate_channel_ls(rx, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("estimate_channel_ls - error power is noise power over |p|^2")
{
    const std::complex<double> pilot{1.5, 2.0};
    const double noise_power = 0.25;
    rng::Stream stream(rng::key(77, 0x88ULL));
    const std::size_t trials = 100000;
    double error_power = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto h = stream.next_cn01();
        const auto w = std::sqrt(noise_power) * stream.next_cn01();
        const auto y = h * pilot + w;
        const auto est = estimate_channel_ls(std::vector{y}, pilot);
        error_power += std::norm(est[0] - h);
    }
    error_power /= static_cast<double>(trials);
    CHECK(error_power == Catch::Approx(noise_power / std::norm(pilot)).epsilon(0.05));
}
