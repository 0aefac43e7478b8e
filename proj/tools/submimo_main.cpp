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
// Command-line front end. Every command is reproducible: inputs, flags and
// the seed fully determine the output bytes, for any --threads value.
// Exit codes: 0 success, 1 data/compute error, 2 usage error.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "submimo/submimo.hpp"

namespace {

using submimo::detail::format_double;

/// Command-line value errors that should exit with the usage status.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& content, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output '" + path + "'");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for output '" + path + "'");
    }
}

/// Whole-string unsigned parse; nullopt on any leftover characters.
std::optional<std::size_t> parse_count(std::string_view field) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        return std::nullopt;
    }
    return value;
}

struct LayoutSpec {
    submimo::ArrayLayout layout = submimo::ArrayLayout::Ula;
    std::size_t rows = 1;
    std::size_t cols = 1;
};

/// "ula:32" or "ura:4x8".
LayoutSpec parse_layout(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string dims = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "ula") {
        if (const auto cols = parse_count(dims)) {
            return {submimo::ArrayLayout::Ula, 1, *cols};
        }
    } else if (kind == "ura") {
        const auto x = dims.find('x');
        if (x != std::string::npos) {
            const auto rows = parse_count(dims.substr(0, x));
            const auto cols = parse_count(dims.substr(x + 1));
            if (rows && cols) {
                return {submimo::ArrayLayout::Ura, *rows, *cols};
            }
        }
    }
    throw UsageError("invalid --layout '" + text + "' (expected ula:<cols> or ura:<rows>x<cols>)");
}

/// "mrc:32" or "single:0".
submimo::Combiner parse_combiner(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const auto value = parse_count(colon == std::string::npos ? "" : text.substr(colon + 1));
    if (value && kind == "mrc") {
        return submimo::Combiner::mrc(*value);
    }
    if (value && kind == "single") {
        return submimo::Combiner::single(*value);
    }
    throw UsageError("invalid --combiner '" + text + "' (expected mrc:<count> or single:<index>)");
}

submimo::FramePattern parse_frame(const std::string& text) {
    if (text == "default") {
        return submimo::FramePattern::uplink_default();
    }
    if (text == "all-silent") {
        return submimo::FramePattern::all_silent();
    }
    if (text == "all-active") {
        return submimo::FramePattern::all_active();
    }
    throw UsageError("invalid --frame '" + text + "' (expected default, all-silent or all-active)");
}

/// Metadata flags shared by convert and synth.
struct MetaFlags {
    double fc_hz = 869.525e6;
    double tx_dbm = 22.6;
    std::string array_label = "ULA";
    std::string scenario = "Unknown";
    std::string path_label;
    double sample_interval_s = 10e-3;
    double sample_duration_s = 66.67e-6;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--fc-hz", fc_hz, "Carrier frequency in Hz");
        cmd->add_option("--tx-dbm", tx_dbm, "Transmit power in dBm recorded in the metadata");
        cmd->add_option("--array-label", array_label, "Array configuration label");
        cmd->add_option("--scenario", scenario, "Propagation scenario: LoS, NLoS or Unknown");
        cmd->add_option("--path-label", path_label, "Measurement path label");
        cmd->add_option("--sample-interval-s", sample_interval_s, "Snapshot interval in seconds");
        cmd->add_option("--sample-duration-s", sample_duration_s, "Snapshot duration in seconds");
    }

    submimo::MeasurementMeta to_meta(const submimo::ChannelTensor& tensor) const {
        submimo::MeasurementMeta meta;
        meta.carrier_freq_hz = fc_hz;
        meta.tx_power_dbm = tx_dbm;
        meta.array_label = array_label;
        meta.scenario = submimo::scenario_from_string(scenario);
        meta.path_label = path_label;
        meta.sample_interval_s = sample_interval_s;
        meta.sample_duration_s = sample_duration_s;
        meta.n_snapshots = tensor.n_snapshots();
        meta.n_subcarriers_used = tensor.n_subcarriers();
        meta.n_bs_antennas = tensor.n_antennas();
        return meta;
    }
};

std::string series_csv(const char* index_column, const char* value_column,
                       std::span<const double> values) {
    std::ostringstream out;
    out << index_column << ',' << value_column << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << i << ',' << format_double(values[i]) << '\n';
    }
    return out.str();
}

std::string compliance_csv(const submimo::ComplianceReport& report) {
    auto flag = [](bool ok) { return ok ? "true" : "false"; };
    std::ostringstream out;
    out << "check,ok,value,margin\n";
    out << "erp_dbm," << flag(report.erp_ok) << ',' << format_double(report.erp_value_dbm) << ','
        << format_double(report.erp_margin_db) << '\n';
    out << "duty_cycle," << flag(report.duty_cycle_ok) << ','
        << format_double(report.duty_cycle_value) << ','
        << format_double(report.duty_cycle_margin) << '\n';
    out << "bandwidth_hz," << flag(report.bandwidth_ok) << ','
        << format_double(report.occupied_bandwidth_value_hz) << ','
        << format_double(report.bandwidth_margin_hz) << '\n';
    out << "carrier_hz," << flag(report.carrier_in_band) << ",,"
        << format_double(report.carrier_margin_hz) << '\n';
    out << "overall," << flag(report.overall) << ",,\n";
    return out.str();
}

bool has_extension(const std::string& path, const char* ext) {
    return std::filesystem::path(path).extension() == ext;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sub-GHz massive MIMO channel analysis toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string format = "csv";
    app.add_option("--seed", seed, "Seed for every randomized step")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (never changes results)")
        ->capture_default_str();
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv"}))
        ->capture_default_str();

    // ---- convert ----------------------------------------------------------
    auto* convert = app.add_subcommand("convert", "Convert between CSV and MMK1 datasets");
    convert->fallthrough();
    std::string convert_input;
    std::string convert_output;
    std::string convert_to;
    std::vector<std::size_t> convert_dims;
    MetaFlags convert_meta;
    convert->add_option("--input", convert_input, "Input file (.csv or .mmk)")->required();
    convert->add_option("--output", convert_output, "Output file")->required();
    convert->add_option("--to", convert_to, "Target format; inferred from extensions if omitted")
        ->check(CLI::IsMember({"csv", "mmk"}));
    convert->add_option("--dims", convert_dims, "Tensor dimensions N,F,M (CSV input only)")
        ->delimiter(',')
        ->expected(1, 3);
    convert_meta.add_to(convert);

    // ---- synth ------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate a synthetic channel tensor");
    synth->fallthrough();
    std::string synth_model = "iid";
    std::vector<std::size_t> synth_dims;
    std::string synth_output;
    double synth_k_factor = 1.0;
    double synth_azimuth = 0.0;
    double synth_elevation = 0.0;
    double synth_value_re = 1.0;
    double synth_value_im = 0.0;
    std::string synth_layout = "ula:32";
    double synth_element_gain = 5.9;
    std::string synth_large_scale;
    MetaFlags synth_meta;
    synth->add_option("--model", synth_model, "Channel model")
        ->check(CLI::IsMember({"iid", "rician", "constant"}))
        ->capture_default_str();
    synth->add_option("--dims", synth_dims, "Tensor dimensions N,F,M")
        ->delimiter(',')
        ->expected(1, 3)
        ->required();
    synth->add_option("--output", synth_output, "Output .mmk file")->required();
    synth->add_option("--k-factor", synth_k_factor, "Rician K-factor (linear)");
    synth->add_option("--azimuth-rad", synth_azimuth, "Rician line-of-sight azimuth");
    synth->add_option("--elevation-rad", synth_elevation, "Rician line-of-sight elevation");
    synth->add_option("--value-re", synth_value_re, "Constant model: real part");
    synth->add_option("--value-im", synth_value_im, "Constant model: imaginary part");
    synth->add_option("--layout", synth_layout, "Array layout for Rician: ula:<n> or ura:<r>x<c>")
        ->capture_default_str();
    synth->add_option("--element-gain-dbi", synth_element_gain, "Element gain in dBi")
        ->capture_default_str();
    synth->add_option("--large-scale", synth_large_scale,
                      "antenna,gain_db CSV applied as a per-antenna large-scale profile");
    synth_meta.add_to(synth);

    // ---- analyze ----------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "Channel statistics from a dataset");
    analyze->require_subcommand(1);
    analyze->fallthrough();

    auto* gain = analyze->add_subcommand("gain", "Per-antenna average gain (dB)");
    gain->fallthrough();
    std::string gain_input;
    std::string gain_output;
    gain->add_option("--input", gain_input, "Input .mmk dataset")->required();
    gain->add_option("--output", gain_output, "Output CSV (default stdout)");

    auto* hardening = analyze->add_subcommand("hardening", "Hardening ratio vs antenna count");
    hardening->fallthrough();
    std::string hardening_input;
    std::string hardening_output;
    std::vector<std::size_t> hardening_m_list;
    hardening->add_option("--input", hardening_input, "Input .mmk dataset")->required();
    hardening->add_option("--output", hardening_output, "Output CSV (default stdout)");
    hardening->add_option("--m-list", hardening_m_list, "Antenna counts, e.g. 1,2,4,8,16,32")
        ->delimiter(',')
        ->required();

    auto* correlation =
        analyze->add_subcommand("correlation", "Mean correlation coefficient vs antenna count");
    correlation->fallthrough();
    std::vector<std::string> correlation_inputs;
    std::string correlation_output;
    std::vector<std::size_t> correlation_m_list;
    std::size_t correlation_trials = 100000;
    correlation->add_option("--input", correlation_inputs,
                            "Input .mmk datasets, one per position (repeat; need >= 2)")
        ->required();
    correlation->add_option("--output", correlation_output, "Output CSV (default stdout)");
    correlation->add_option("--m-list", correlation_m_list, "Antenna counts")
        ->delimiter(',')
        ->required();
    correlation->add_option("--trials", correlation_trials, "Random pair draws per antenna count")
        ->capture_default_str();

    auto* combined = analyze->add_subcommand("combined-gain", "Post-combining gain over time");
    combined->fallthrough();
    std::string combined_input;
    std::string combined_output;
    std::size_t combined_m = 1;
    combined->add_option("--input", combined_input, "Input .mmk dataset")->required();
    combined->add_option("--output", combined_output, "Output CSV (default stdout)");
    combined->add_option("--m", combined_m, "Number of combined antennas")->required();

    // ---- comply -----------------------------------------------------------
    auto* comply = app.add_subcommand("comply", "Check a configuration against SRD band limits");
    comply->fallthrough();
    std::string comply_band = "54";
    std::string comply_bands_file;
    double comply_carrier_hz = 869.525e6;
    double comply_tx_dbm = 22.6;
    double comply_antenna_dbi = 5.9;
    std::string comply_frame = "default";
    std::string comply_output;
    comply->add_option("--band", comply_band, "Band id")->capture_default_str();
    comply->add_option("--bands-file", comply_bands_file, "JSON file with extra band records");
    comply->add_option("--carrier-hz", comply_carrier_hz, "Carrier frequency in Hz")
        ->capture_default_str();
    comply->add_option("--tx-dbm", comply_tx_dbm, "Input power at the antenna in dBm")
        ->capture_default_str();
    comply->add_option("--antenna-dbi", comply_antenna_dbi, "Antenna gain in dBi")
        ->capture_default_str();
    comply->add_option("--frame", comply_frame, "Frame pattern: default, all-silent, all-active")
        ->capture_default_str();
    comply->add_option("--output", comply_output, "Output CSV (default stdout)");

    // ---- simulate ---------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Uplink SNR, outage and power requirements");
    simulate->require_subcommand(1);
    simulate->fallthrough();

    auto* snr = simulate->add_subcommand("snr", "Per-snapshot post-combining SNR");
    snr->fallthrough();
    std::string snr_input;
    std::string snr_output;
    std::string snr_combiner = "mrc:1";
    double snr_tx_dbm = 0.0;
    double snr_noise_dbm = -120.0;
    snr->add_option("--input", snr_input, "Input .mmk dataset")->required();
    snr->add_option("--output", snr_output, "Output CSV (default stdout)");
    snr->add_option("--combiner", snr_combiner, "mrc:<count> or single:<index>")
        ->capture_default_str();
    snr->add_option("--tx-dbm", snr_tx_dbm, "Transmit power in dBm")->capture_default_str();
    snr->add_option("--noise-dbm", snr_noise_dbm, "Noise power over the occupied bandwidth")
        ->capture_default_str();

    auto* outage = simulate->add_subcommand("outage", "Fraction of snapshots below a target SNR");
    outage->fallthrough();
    std::string outage_input;
    std::string outage_output;
    std::string outage_combiner = "mrc:1";
    double outage_tx_dbm = 0.0;
    double outage_noise_dbm = -120.0;
    double outage_target_snr = 0.0;
    outage->add_option("--input", outage_input, "Input .mmk dataset")->required();
    outage->add_option("--output", outage_output, "Output CSV (default stdout)");
    outage->add_option("--combiner", outage_combiner, "mrc:<count> or single:<index>")
        ->capture_default_str();
    outage->add_option("--tx-dbm", outage_tx_dbm, "Transmit power in dBm")->capture_default_str();
    outage->add_option("--noise-dbm", outage_noise_dbm, "Noise power over the occupied bandwidth")
        ->capture_default_str();
    outage->add_option("--target-snr", outage_target_snr, "Target SNR in dB")->required();

    auto* required =
        simulate->add_subcommand("required-power", "Transmit power needed for an outage target");
    required->fallthrough();
    std::string required_input;
    std::string required_output;
    std::string required_combiner = "mrc:1";
    double required_noise_dbm = -120.0;
    double required_target_snr = 0.0;
    double required_target_outage = 0.01;
    required->add_option("--input", required_input, "Input .mmk dataset")->required();
    required->add_option("--output", required_output, "Output CSV (default stdout)");
    required->add_option("--combiner", required_combiner, "mrc:<count> or single:<index>")
        ->capture_default_str();
    required->add_option("--noise-dbm", required_noise_dbm,
                         "Noise power over the occupied bandwidth")
        ->capture_default_str();
    required->add_option("--target-snr", required_target_snr, "Target SNR in dB")->required();
    required->add_option("--target-outage", required_target_outage, "Outage target in (0,1)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (convert->parsed()) {
            std::string target = convert_to;
            if (target.empty()) {
                if (has_extension(convert_output, ".mmk")) {
                    target = "mmk";
                } else if (has_extension(convert_output, ".csv")) {
                    target = "csv";
                } else {
                    throw UsageError("cannot infer conversion target; pass --to csv|mmk");
                }
            }
            if (target == "mmk") {
                if (convert_dims.size() != 3) {
                    throw UsageError("--dims N,F,M is required when converting CSV to MMK1");
                }
                const auto tensor = submimo::import_csv(convert_input, convert_dims[0],
                                                        convert_dims[1], convert_dims[2]);
                submimo::save_dataset(tensor, convert_meta.to_meta(tensor), convert_output);
            } else {
                const auto [tensor, meta] = submimo::load_dataset(convert_input);
                submimo::export_csv(tensor, convert_output);
            }
        } else if (synth->parsed()) {
            if (synth_dims.size() != 3) {
                throw UsageError("--dims N,F,M needs exactly three values");
            }
            submimo::SynthConfig config;
            config.n_snapshots = synth_dims[0];
            config.n_subcarriers = synth_dims[1];
            config.n_antennas = synth_dims[2];
            config.seed = seed;
            std::optional<submimo::ArrayGeometry> geometry;
            if (synth_model == "iid") {
                config.model = submimo::SynthConfig::Model::IidRayleigh;
            } else if (synth_model == "rician") {
                config.model = submimo::SynthConfig::Model::Rician;
                config.k_factor_linear = synth_k_factor;
                config.azimuth_rad = synth_azimuth;
                config.elevation_rad = synth_elevation;
                const auto layout = parse_layout(synth_layout);
                geometry = submimo::build_array_geometry(layout.layout, layout.rows, layout.cols,
                                                         synth_meta.fc_hz, synth_element_gain);
            } else {
                config.model = submimo::SynthConfig::Model::Constant;
                config.constant_value = {synth_value_re, synth_value_im};
            }
            if (!synth_large_scale.empty()) {
                config.large_scale_db =
                    submimo::read_gain_csv(synth_large_scale).per_antenna_gain_db;
            }
            const auto tensor = submimo::generate(config, geometry, threads);
            submimo::save_dataset(tensor, synth_meta.to_meta(tensor), synth_output);
        } else if (gain->parsed()) {
            const auto [tensor, meta] = submimo::load_dataset(gain_input);
            const auto profile = submimo::avg_gain_per_antenna(tensor);
            std::ostringstream out;
            submimo::write_gain_csv(profile, out);
            write_output(out.str(), gain_output);
        } else if (hardening->parsed()) {
            const auto [tensor, meta] = submimo::load_dataset(hardening_input);
            const auto curve = submimo::hardening_curve(tensor, hardening_m_list);
            std::ostringstream out;
            out << "m,ratio\n";
            for (const auto& [m, ratio] : curve.points) {
                out << m << ',' << format_double(ratio) << '\n';
            }
            write_output(out.str(), hardening_output);
        } else if (correlation->parsed()) {
            std::vector<submimo::ChannelTensor> positions;
            positions.reserve(correlation_inputs.size());
            for (const auto& path : correlation_inputs) {
                positions.push_back(submimo::load_dataset(path).first);
            }
            const auto estimates = submimo::avg_correlation_vs_m(
                positions, correlation_m_list, correlation_trials, seed, threads);
            std::ostringstream out;
            out << "m,mean_delta,n_trials,seed\n";
            for (const auto& est : estimates) {
                out << est.m_selected << ',' << format_double(est.mean_delta) << ','
                    << est.n_trials << ',' << est.seed << '\n';
            }
            write_output(out.str(), correlation_output);
        } else if (combined->parsed()) {
            const auto [tensor, meta] = submimo::load_dataset(combined_input);
            const auto series = submimo::combined_gain_series(tensor, combined_m);
            write_output(series_csv("snapshot", "gain_db", series), combined_output);
        } else if (comply->parsed()) {
            std::vector<submimo::SrdBand> extra_bands;
            if (!comply_bands_file.empty()) {
                extra_bands = submimo::load_bands_json(comply_bands_file);
            }
            const auto band = submimo::find_band(comply_band, extra_bands);
            const auto numerology = submimo::Numerology::lte_srd_default();
            const auto frame = submimo::build_frame(numerology, parse_frame(comply_frame));
            const auto report = submimo::check_compliance(band, comply_carrier_hz, numerology,
                                                          frame, comply_tx_dbm,
                                                          comply_antenna_dbi);
            write_output(compliance_csv(report), comply_output);
        } else if (snr->parsed()) {
            const auto [tensor, meta] = submimo::load_dataset(snr_input);
            submimo::LinkBudget budget;
            budget.tx_power_dbm = snr_tx_dbm;
            budget.noise_power_dbm = snr_noise_dbm;
            const auto series =
                submimo::simulate_uplink(tensor, budget, parse_combiner(snr_combiner));
            write_output(series_csv("snapshot", "snr_db", series.snr_db), snr_output);
        } else if (outage->parsed()) {
            const auto [tensor, meta] = submimo::load_dataset(outage_input);
            submimo::LinkBudget budget;
            budget.tx_power_dbm = outage_tx_dbm;
            budget.noise_power_dbm = outage_noise_dbm;
            const auto series =
                submimo::simulate_uplink(tensor, budget, parse_combiner(outage_combiner));
            const double p = submimo::outage_probability(series, outage_target_snr);
            std::ostringstream out;
            out << "target_snr_db,outage\n"
                << format_double(outage_target_snr) << ',' << format_double(p) << '\n';
            write_output(out.str(), outage_output);
        } else if (required->parsed()) {
            const auto [tensor, meta] = submimo::load_dataset(required_input);
            submimo::LinkBudget budget;
            budget.noise_power_dbm = required_noise_dbm;
            budget.target_snr_db = required_target_snr;
            budget.target_outage = required_target_outage;
            const double power = submimo::required_tx_power(tensor, budget,
                                                            parse_combiner(required_combiner),
                                                            required_target_snr,
                                                            required_target_outage);
            std::ostringstream out;
            out << "target_snr_db,target_outage,required_tx_dbm\n"
                << format_double(required_target_snr) << ','
                << format_double(required_target_outage) << ',' << format_double(power) << '\n';
            write_output(out.str(), required_output);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
