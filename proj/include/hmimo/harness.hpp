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

#ifndef HMIMO_HARNESS_HPP
#define HMIMO_HARNESS_HPP

// Sweep specifications, figure presets, CSV emission and verification
// dispatch shared by the command-line tool and the test suites.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hmimo/beamformers.hpp"
#include "hmimo/closed_form.hpp"
#include "hmimo/config.hpp"
#include "hmimo/moment_oracles.hpp"
#include "hmimo/rate_engine.hpp"

namespace hmimo::harness {

enum class SweptVariable { snr_db, M, K };

inline std::string_view to_string(SweptVariable v) {
    switch (v) {
    case SweptVariable::snr_db: return "snr_db";
    case SweptVariable::M: return "M";
    case SweptVariable::K: return "K";
    }
    return "?";
}

// Inclusive arithmetic range "start:step:stop", or a single value.
struct Range {
    double start = 0.0;
    double step = 0.0;
    double stop = 0.0;

    bool single() const { return start == stop; }

    std::vector<double> values() const {
        if (single())
            return {start};
        if (step == 0.0 || (stop - start) / step < 0.0)
            throw ConfigError("range " + text() + " is empty");
        std::vector<double> out;
        const double slack = 1e-9 * std::abs(step);
        for (std::size_t i = 0;; ++i) {
            const double v = start + static_cast<double>(i) * step;
            if (step > 0.0 ? v > stop + slack : v < stop - slack)
                break;
            out.push_back(v);
        }
        return out;
    }

    std::string text() const {
        std::ostringstream os;
        os << start << ':' << step << ':' << stop;
        return os.str();
    }

    static Range parse(std::string_view text) {
        auto number = [&](std::string_view part) {
            const std::string s(part);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception &) {
                used = 0;
            }
            if (used == 0 || used != s.size() || !std::isfinite(v))
                throw ConfigError("invalid number '" + s + "' in range '" + std::string(text) + "'");
            return v;
        };
        const auto first = text.find(':');
        if (first == std::string_view::npos) {
            const double v = number(text);
            return {v, 0.0, v};
        }
        const auto second = text.find(':', first + 1);
        if (second == std::string_view::npos)
            throw ConfigError("range '" + std::string(text) + "' must be start:step:stop");
        Range r{number(text.substr(0, first)), number(text.substr(first + 1, second - first - 1)),
                number(text.substr(second + 1))};
        if (r.step == 0.0 && r.start != r.stop)
            throw ConfigError("range '" + std::string(text) + "' has zero step");
        r.values(); // rejects empty ranges
        return r;
    }
};

struct SweepSpec {
    SweptVariable swept = SweptVariable::snr_db;
    std::vector<double> values{};
    std::size_t antennas = 64;
    std::size_t users = 8;
    double snr_db = 10.0;
    std::vector<Scheme> schemes{Scheme::analog, Scheme::mrc, Scheme::zf};
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    ChannelSpec channel{};
    Direction direction = Direction::uplink;
    std::string output; // empty: standard output

    std::size_t antennas_at(double v) const {
        return swept == SweptVariable::M ? static_cast<std::size_t>(v) : antennas;
    }
    std::size_t users_at(double v) const { return swept == SweptVariable::K ? static_cast<std::size_t>(v) : users; }

    void validate() const {
        if (values.empty())
            throw ConfigError("sweep range is empty");
        if (trials == 0)
            throw ConfigError("trials must be at least 1");
        if (schemes.empty())
            throw ConfigError("at least one scheme is required");
        if (channel.model == ChannelModel::mmwave)
            channel.mmwave.validate();
        for (double v : values) {
            if (swept != SweptVariable::snr_db && (v < 1.0 || v != std::floor(v)))
                throw ConfigError(std::string(to_string(swept)) + " value " + std::to_string(v) +
                                  " is not a positive integer");
            const std::size_t M = antennas_at(v);
            const std::size_t K = users_at(v);
            if (M == 0 || K == 0)
                throw ConfigError("antenna and user counts must be positive");
            if (M % K != 0)
                throw ConfigError("K = " + std::to_string(K) + " does not divide M = " + std::to_string(M) +
                                  " at swept value " + std::to_string(v));
        }
    }
};

// Builds a sweep from the three axis arguments; at most one may be a range,
// and that one becomes the swept variable (SNR when none is).
inline SweepSpec make_sweep(std::string_view m_text, std::string_view k_text, std::string_view snr_text) {
    const Range m = Range::parse(m_text);
    const Range k = Range::parse(k_text);
    const Range snr = Range::parse(snr_text);
    const int ranged = int(!m.single()) + int(!k.single()) + int(!snr.single());
    if (ranged > 1)
        throw ConfigError("only one of M, K and SNR may be swept");

    SweepSpec spec;
    if (!m.single()) {
        spec.swept = SweptVariable::M;
        spec.values = m.values();
    } else if (!k.single()) {
        spec.swept = SweptVariable::K;
        spec.values = k.values();
    } else {
        spec.swept = SweptVariable::snr_db;
        spec.values = snr.values();
    }
    auto count = [](double v, const char *what) {
        if (v < 1.0 || v != std::floor(v))
            throw ConfigError(std::string(what) + " must be a positive integer");
        return static_cast<std::size_t>(v);
    };
    if (spec.swept != SweptVariable::M)
        spec.antennas = count(m.start, "M");
    if (spec.swept != SweptVariable::K)
        spec.users = count(k.start, "K");
    if (spec.swept != SweptVariable::snr_db)
        spec.snr_db = snr.start;
    return spec;
}

inline std::vector<Scheme> parse_schemes(std::string_view list) {
    std::vector<Scheme> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const auto comma = list.find(',', pos);
        const auto item = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        const auto s = parse_scheme(item);
        if (!s)
            throw ConfigError("unknown scheme '" + std::string(item) + "' (expected analog, mrc or zf)");
        out.push_back(*s);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

inline ChannelModel parse_channel_model(std::string_view name) {
    if (name == "rayleigh")
        return ChannelModel::rayleigh;
    if (name == "mmwave")
        return ChannelModel::mmwave;
    throw ConfigError("unknown channel model '" + std::string(name) + "' (expected rayleigh or mmwave)");
}

inline Direction parse_direction(std::string_view name) {
    if (name == "up" || name == "uplink")
        return Direction::uplink;
    if (name == "down" || name == "downlink")
        return Direction::downlink;
    throw ConfigError("unknown direction '" + std::string(name) + "' (expected up or down)");
}

// Flat key-value sweep settings; every key mirrors a command-line flag.
// Unset members keep the defaults of SweepSpec.
struct SweepSettings {
    std::string m = "64";
    std::string k = "8";
    std::string snr_db = "-10:2:20";
    std::optional<std::string> schemes;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> channel;
    std::optional<std::size_t> paths;
    std::optional<double> spacing;
    std::optional<std::string> direction;
    std::optional<std::string> out;

    SweepSpec to_spec() const {
        SweepSpec spec = make_sweep(m, k, snr_db);
        if (schemes)
            spec.schemes = parse_schemes(*schemes);
        if (trials)
            spec.trials = *trials;
        if (seed)
            spec.seed = *seed;
        if (channel)
            spec.channel.model = parse_channel_model(*channel);
        if (paths)
            spec.channel.mmwave.paths = *paths;
        if (spacing)
            spec.channel.mmwave.spacing_ratio = *spacing;
        if (direction)
            spec.direction = parse_direction(*direction);
        if (out)
            spec.output = *out;
        spec.validate();
        return spec;
    }
};

namespace detail {

inline std::string json_text(const nlohmann::json &v, const std::string &key) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number())
        return nlohmann::json(v).dump();
    throw ConfigError("config key '" + key + "' must be a string or number");
}

inline std::uint64_t json_unsigned(const nlohmann::json &v, const std::string &key) {
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))
        return v.get<std::uint64_t>();
    if (v.is_string()) {
        try {
            std::size_t used = 0;
            const auto s = v.get<std::string>();
            const auto x = std::stoull(s, &used);
            if (used == s.size())
                return x;
        } catch (const std::exception &) {
        }
    }
    throw ConfigError("config key '" + key + "' must be a nonnegative integer");
}

} // namespace detail

// Applies a flat JSON object onto `settings`. Unknown keys are rejected.
inline void apply_config(const nlohmann::json &doc, SweepSettings &settings) {
    if (!doc.is_object())
        throw ConfigError("config file must hold a JSON object");
    for (const auto &[key, value] : doc.items()) {
        if (key == "m")
            settings.m = detail::json_text(value, key);
        else if (key == "k")
            settings.k = detail::json_text(value, key);
        else if (key == "snr_db" || key == "snr-db")
            settings.snr_db = detail::json_text(value, key);
        else if (key == "schemes")
            settings.schemes = value.is_array() ? [&] {
                std::string joined;
                for (const auto &s : value)
                    joined += (joined.empty() ? "" : ",") + detail::json_text(s, key);
                return joined;
            }()
                                                : detail::json_text(value, key);
        else if (key == "trials")
            settings.trials = detail::json_unsigned(value, key);
        else if (key == "seed")
            settings.seed = detail::json_unsigned(value, key);
        else if (key == "channel")
            settings.channel = detail::json_text(value, key);
        else if (key == "paths")
            settings.paths = detail::json_unsigned(value, key);
        else if (key == "spacing") {
            if (!value.is_number())
                throw ConfigError("config key 'spacing' must be a number");
            settings.spacing = value.get<double>();
        } else if (key == "direction")
            settings.direction = detail::json_text(value, key);
        else if (key == "out")
            settings.out = detail::json_text(value, key);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
}

inline void load_config_file(const std::string &path, SweepSettings &settings) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    apply_config(doc, settings);
}

struct SweepRow {
    SweptVariable swept = SweptVariable::snr_db;
    double value = 0.0;
    Scheme scheme = Scheme::analog;
    Direction direction = Direction::uplink;
    ChannelModel channel = ChannelModel::rayleigh;
    std::size_t trials = 0;
    double sum_rate_sim = 0.0;
    double stderr_sum = 0.0;
    std::optional<double> sum_rate_closed_form;
};

// Rows in sweep order: swept values outer, schemes inner.
inline std::vector<SweepRow> run_sweep(const SweepSpec &spec, std::size_t workers = 0) {
    spec.validate();
    std::vector<SweepRow> rows;
    auto emit = [&](double value, const std::vector<std::vector<RateEstimate>> &est, std::size_t g) {
        for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
            const RateEstimate &e = est[s][g];
            SweepRow row{spec.swept, value, spec.schemes[s], spec.direction, spec.channel.model, e.trials,
                         e.sum_rate, e.sum_rate_stderr, std::nullopt};
            if (e.closed_form)
                row.sum_rate_closed_form = static_cast<double>(e.users) * *e.closed_form;
            rows.push_back(row);
        }
    };

    if (spec.swept == SweptVariable::snr_db) {
        std::vector<double> gammas;
        for (double db : spec.values)
            gammas.push_back(db_to_linear(db));
        const SystemConfig config(spec.antennas, spec.users, gammas.front(), spec.seed);
        const auto est = monte_carlo_rate_curve(
            {config, spec.channel, spec.direction, spec.schemes, gammas, spec.trials, workers});
        for (std::size_t g = 0; g < gammas.size(); ++g)
            emit(spec.values[g], est, g);
        return rows;
    }

    const double gamma = db_to_linear(spec.snr_db);
    for (double v : spec.values) {
        const SystemConfig config(spec.antennas_at(v), spec.users_at(v), gamma, spec.seed);
        const auto est =
            monte_carlo_rate_curve({config, spec.channel, spec.direction, spec.schemes, {gamma}, spec.trials, workers});
        emit(v, est, 0);
    }
    return rows;
}

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline constexpr std::string_view kSweepHeader =
    "swept_var,value,scheme,direction,channel_model,trials,sum_rate_sim,stderr,sum_rate_closed_form";

inline void write_csv(std::ostream &os, const std::vector<SweepRow> &rows) {
    os << kSweepHeader << '\n';
    for (const auto &r : rows) {
        os << to_string(r.swept) << ',' << format_number(r.value) << ',' << to_string(r.scheme) << ','
           << to_string(r.direction) << ',' << to_string(r.channel) << ',' << r.trials << ','
           << format_number(r.sum_rate_sim) << ',' << format_number(r.stderr_sum) << ','
           << (r.sum_rate_closed_form ? format_number(*r.sum_rate_closed_form) : "") << '\n';
    }
}

inline std::string to_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

inline constexpr std::string_view kMomentHeader = "name,target,estimate,error,error_kind,tolerance,samples,asserted,pass";

inline void write_csv(std::ostream &os, const std::vector<moments::MomentCheckResult> &results) {
    os << kMomentHeader << '\n';
    for (const auto &r : results) {
        os << r.name << ',' << format_number(r.target) << ',' << format_number(r.estimate) << ','
           << format_number(r.error) << ',' << (r.kind == moments::ErrorKind::relative ? "relative" : "absolute")
           << ',' << format_number(r.tolerance) << ',' << r.samples << ',' << (r.asserted ? "true" : "false") << ','
           << (r.pass ? "true" : "false") << '\n';
    }
}

// ---------------------------------------------------------------------------
// Figure presets

inline std::vector<SweepSpec> preset(std::string_view name) {
    auto snr_sweep = [](std::size_t M, std::size_t K, Range r) {
        SweepSpec s;
        s.swept = SweptVariable::snr_db;
        s.values = r.values();
        s.antennas = M;
        s.users = K;
        return s;
    };

    std::vector<SweepSpec> out;
    if (name == "fig1a") {
        for (std::size_t K : {6, 10})
            out.push_back(snr_sweep(120, K, {-10, 2, 14}));
    } else if (name == "fig1b") {
        SweepSpec s;
        s.swept = SweptVariable::M;
        s.values = Range{20, 10, 200}.values();
        s.users = 10;
        s.snr_db = 10.0;
        out.push_back(s);
    } else if (name == "fig2") {
        SweepSpec s = snr_sweep(64, 8, {-20, 2, 20});
        s.schemes = {Scheme::analog, Scheme::zf};
        out.push_back(s);
    } else if (name == "fig3") {
        for (std::size_t K : {4, 8}) {
            SweepSpec s = snr_sweep(64, K, {-10, 2, 20});
            s.direction = Direction::downlink;
            out.push_back(s);
        }
    } else if (name == "fig4") {
        for (std::size_t K : {4, 8}) {
            SweepSpec s = snr_sweep(64, K, {-10, 2, 20});
            s.channel = {ChannelModel::mmwave, {4, 0.5}};
            out.push_back(s);
        }
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig1a, fig1b, fig2, fig3 or fig4)");
    }
    return out;
}

/// "out.csv" -> "out_K6.csv" for presets that emit one file per user count.
inline std::string with_suffix(const std::string &path, const std::string &suffix) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

// ---------------------------------------------------------------------------
// Thresholds and verification

inline std::string format_thresholds(const closed_form::ThresholdReport &r) {
    char buf[256];
    std::ostringstream os;
    os << "M = " << r.antennas << ", K = " << r.users << ", N = " << r.subarray_size << '\n';
    std::snprintf(buf, sizeof buf, "K^2 = %.6g vs pi(sqrt(5)-1)M/8 = %.6g\n", r.k_squared, r.bound);
    os << buf;
    if (r.mrc_always_dominates)
        os << "MRC hybrid dominates analog at all SNR\n";
    if (r.eta1) {
        std::snprintf(buf, sizeof buf, "eta1 = %.6g (%.3f dB): analog beats MRC hybrid above this SNR\n", *r.eta1,
                      linear_to_db(*r.eta1));
        os << buf;
    } else {
        os << "eta1: not applicable (MRC hybrid always wins)\n";
    }
    if (r.eta2 > 0.0)
        std::snprintf(buf, sizeof buf, "eta2 = %.6g (%.3f dB): ZF hybrid beats analog above this SNR\n", r.eta2,
                      linear_to_db(r.eta2));
    else
        std::snprintf(buf, sizeof buf, "eta2 = %.6g: ZF hybrid beats analog at every SNR\n", r.eta2);
    os << buf;
    return os.str();
}

enum class Suite { diag, mrc, zf, all };

inline Suite parse_suite(std::string_view name) {
    if (name == "diag")
        return Suite::diag;
    if (name == "mrc")
        return Suite::mrc;
    if (name == "zf")
        return Suite::zf;
    if (name == "all")
        return Suite::all;
    throw ConfigError("unknown suite '" + std::string(name) + "' (expected diag, mrc, zf or all)");
}

struct VerificationParams {
    std::size_t diag_n = 64, diag_k = 8;
    std::size_t mrc_n = 12, mrc_k = 10;
    std::size_t zf_n = 12, zf_k = 10;
    double zf_gamma = 10.0;
    std::size_t samples = 100'000;
    std::uint64_t seed = 1;
};

inline std::vector<moments::MomentCheckResult> run_verification(Suite suite, const VerificationParams &p,
                                                                std::size_t workers = 0) {
    if (p.samples == 0)
        throw ConfigError("samples must be positive");
    std::vector<moments::MomentCheckResult> out;
    auto append = [&](std::vector<moments::MomentCheckResult> r) { out.insert(out.end(), r.begin(), r.end()); };
    if (suite == Suite::diag || suite == Suite::all)
        append(moments::check_diag_moments(p.diag_n, p.diag_k, p.samples, p.seed, workers));
    if (suite == Suite::mrc || suite == Suite::all)
        append(moments::check_mrc_moments(p.mrc_n, p.mrc_k, p.samples, p.seed, workers));
    if (suite == Suite::zf || suite == Suite::all)
        append(moments::check_zf_distribution(p.zf_gamma, p.zf_n, p.zf_k, p.samples, p.seed, workers));
    return out;
}

} // namespace hmimo::harness

#endif
