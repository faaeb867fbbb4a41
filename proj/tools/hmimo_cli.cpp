// SPDX-License-Identifier: Apache-2.0
//
// hmimo: sub-connected hybrid massive-MIMO rate analysis and simulation
// Copyright (C) 2026 The hmimo Authors
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

// Command-line front end: rate sweeps, figure presets, threshold queries and
// moment verification. Exit status: 0 success, 1 usage error, 2 a verification
// check failed.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hmimo/hmimo.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

using namespace hmimo;
using namespace hmimo::harness;

void emit_rows(const std::vector<SweepRow> &rows, const std::string &path) {
    if (path.empty()) {
        write_csv(std::cout, rows);
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    write_csv(out, rows);
}

struct SweepFlags {
    std::string m, k, snr_db, schemes, channel, direction, out, config;
    std::size_t trials = 0, paths = 0;
    std::uint64_t seed = 0;
    double spacing = 0.0;
};

void add_sweep_flags(CLI::App &cmd, SweepFlags &f) {
    cmd.add_option("--m", f.m, "Antenna count, or start:step:stop to sweep it");
    cmd.add_option("--k", f.k, "User count, or start:step:stop to sweep it");
    cmd.add_option("--snr-db", f.snr_db, "SNR in dB, or start:step:stop to sweep it");
    cmd.add_option("--schemes", f.schemes, "Comma-separated subset of analog,mrc,zf");
    cmd.add_option("--trials", f.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", f.seed, "Reproducibility seed");
    cmd.add_option("--channel", f.channel, "rayleigh or mmwave")->check(CLI::IsMember({"rayleigh", "mmwave"}));
    cmd.add_option("--paths", f.paths, "mmWave path count")->check(CLI::PositiveNumber);
    cmd.add_option("--spacing", f.spacing, "mmWave element spacing over wavelength")->check(CLI::PositiveNumber);
    cmd.add_option("--direction", f.direction, "up or down")->check(CLI::IsMember({"up", "down"}));
    cmd.add_option("--out", f.out, "Output CSV path (default: stdout)");
    cmd.add_option("--config", f.config, "Flat JSON file with the same keys as the flags");
}

SweepSettings collect(const CLI::App &cmd, const SweepFlags &f) {
    SweepSettings s;
    if (!f.config.empty())
        load_config_file(f.config, s);
    auto given = [&](const char *name) { return cmd.get_option(name)->count() > 0; };
    if (given("--m")) s.m = f.m;
    if (given("--k")) s.k = f.k;
    if (given("--snr-db")) s.snr_db = f.snr_db;
    if (given("--schemes")) s.schemes = f.schemes;
    if (given("--trials")) s.trials = f.trials;
    if (given("--seed")) s.seed = f.seed;
    if (given("--channel")) s.channel = f.channel;
    if (given("--paths")) s.paths = f.paths;
    if (given("--spacing")) s.spacing = f.spacing;
    if (given("--direction")) s.direction = f.direction;
    if (given("--out")) s.out = f.out;
    return s;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Sub-connected hybrid massive-MIMO rate simulator"};
    app.require_subcommand(1);

    SweepFlags sweep_flags;
    auto *sweep = app.add_subcommand("sweep", "Monte Carlo sum-rate sweep to CSV");
    add_sweep_flags(*sweep, sweep_flags);

    std::size_t th_m = 0, th_k = 0;
    auto *thresholds = app.add_subcommand("thresholds", "SNR thresholds between analog and hybrid detection");
    thresholds->add_option("--m", th_m, "Antenna count")->required();
    thresholds->add_option("--k", th_k, "User count")->required();

    std::string suite_name = "all", verify_out;
    std::size_t v_n = 0, v_k = 0;
    VerificationParams vp;
    double zf_snr_db = linear_to_db(vp.zf_gamma);
    auto *verify = app.add_subcommand("verify", "Monte Carlo checks of the effective-channel moments");
    verify->add_option("--suite", suite_name, "diag, mrc, zf or all")
        ->check(CLI::IsMember({"diag", "mrc", "zf", "all"}));
    verify->add_option("--n", v_n, "Antennas per subarray (all suites)");
    verify->add_option("--k", v_k, "User count (all suites)");
    verify->add_option("--snr-db", zf_snr_db, "SNR for the ZF distribution check");
    verify->add_option("--samples", vp.samples, "Channel draws per suite");
    verify->add_option("--seed", vp.seed, "Reproducibility seed");
    verify->add_option("--out", verify_out, "Output CSV path (default: stdout)");

    std::string figure, reproduce_out;
    std::size_t rep_trials = 0;
    std::uint64_t rep_seed = 1;
    auto *reproduce = app.add_subcommand("reproduce", "Run a figure preset");
    reproduce->add_option("figure", figure, "fig1a, fig1b, fig2, fig3 or fig4")
        ->required()
        ->check(CLI::IsMember({"fig1a", "fig1b", "fig2", "fig3", "fig4"}));
    reproduce->add_option("--trials", rep_trials, "Override trials per point")->check(CLI::PositiveNumber);
    reproduce->add_option("--seed", rep_seed, "Reproducibility seed");
    reproduce->add_option("--out", reproduce_out, "Output CSV path; multi-curve presets add a _K<n> suffix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*sweep) {
            const SweepSpec spec = collect(*sweep, sweep_flags).to_spec();
            emit_rows(run_sweep(spec), spec.output);
            return 0;
        }
        if (*thresholds) {
            std::cout << format_thresholds(closed_form::thresholds(th_m, th_k));
            return 0;
        }
        if (*verify) {
            if (v_n > 0)
                vp.diag_n = vp.mrc_n = vp.zf_n = v_n;
            if (v_k > 0)
                vp.diag_k = vp.mrc_k = vp.zf_k = v_k;
            vp.zf_gamma = db_to_linear(zf_snr_db);
            const auto results = run_verification(parse_suite(suite_name), vp);
            if (verify_out.empty()) {
                write_csv(std::cout, results);
            } else {
                std::ofstream out(verify_out);
                if (!out)
                    throw ConfigError("cannot write '" + verify_out + "'");
                write_csv(out, results);
            }
            for (const auto &r : results)
                if (r.asserted && !r.pass)
                    std::cerr << "check failed: " << r.name << " estimate " << r.estimate << " target " << r.target
                              << '\n';
            return moments::all_asserted_pass(results) ? 0 : kExitVerification;
        }
        if (*reproduce) {
            auto specs = preset(figure);
            for (auto &spec : specs) {
                if (rep_trials > 0)
                    spec.trials = rep_trials;
                spec.seed = rep_seed;
                const auto rows = run_sweep(spec);
                if (specs.size() > 1 && !reproduce_out.empty())
                    emit_rows(rows, with_suffix(reproduce_out, "_K" + std::to_string(spec.users)));
                else
                    emit_rows(rows, reproduce_out);
            }
            return 0;
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
