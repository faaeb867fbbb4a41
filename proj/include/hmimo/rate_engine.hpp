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

#ifndef HMIMO_RATE_ENGINE_HPP
#define HMIMO_RATE_ENGINE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "hmimo/beamformers.hpp"
#include "hmimo/closed_form.hpp"
#include "hmimo/config.hpp"
#include "hmimo/parallel.hpp"
#include "hmimo/random.hpp"
#include "hmimo/system_model.hpp"

namespace hmimo {

enum class Direction { uplink, downlink };

inline std::string_view to_string(Direction d) { return d == Direction::uplink ? "up" : "down"; }

// Per-user SINR for one realization. Powers are normalized to unit noise
// variance, so signal and interference carry the factor gamma.
struct SinrSample {
    std::size_t user = 0;
    double sinr = 0.0;
    double signal = 0.0;
    double interference = 0.0;
    double noise = 0.0;
};

// Power terms at unit SNR. Every linear scheme's SINR at SNR gamma is
// gamma * signal / (gamma * interference + noise).
struct LinkGains {
    double signal = 0.0;
    double interference = 0.0;
    double noise = 0.0;

    SinrSample at(double gamma, std::size_t user) const {
        SinrSample s{user, 0.0, gamma * signal, gamma * interference, noise};
        s.sinr = s.signal / (s.interference + s.noise);
        return s;
    }
};

/// Uplink gains: transfer W A H, noise gain ||w_k^T A||^2.
inline std::vector<LinkGains> uplink_gains(const ChannelMatrix &H, const AnalogCombiner &A, const DigitalCombiner &W) {
    if (A.antennas() != H.antennas() || static_cast<std::size_t>(W.entries.cols()) != A.rf_chains())
        throw ConfigError("combiner dimensions do not match the channel");
    const CMatrix WA = W.entries * A.entries;
    const CMatrix T = WA * H.entries;
    if (T.rows() != T.cols())
        throw ConfigError("digital combiner must produce one output per user");
    std::vector<LinkGains> out(static_cast<std::size_t>(T.rows()));
    for (Eigen::Index k = 0; k < T.rows(); ++k) {
        auto &g = out[static_cast<std::size_t>(k)];
        g.signal = std::norm(T(k, k));
        for (Eigen::Index j = 0; j < T.cols(); ++j)
            if (j != k)
                g.interference += std::norm(T(k, j));
        g.noise = WA.row(k).squaredNorm();
    }
    return out;
}

inline std::vector<SinrSample> per_user_sinr(const ChannelMatrix &H, const AnalogCombiner &A,
                                             const DigitalCombiner &W, double gamma) {
    if (!(gamma > 0.0))
        throw ConfigError("SNR must be positive");
    const auto gains = uplink_gains(H, A, W);
    std::vector<SinrSample> out;
    out.reserve(gains.size());
    for (std::size_t k = 0; k < gains.size(); ++k)
        out.push_back(gains[k].at(gamma, k));
    return out;
}

/// Downlink gains: user k receives h_k^H P s plus unit-variance noise.
inline std::vector<LinkGains> downlink_gains(const ChannelMatrix &H, const DownlinkPrecoders &P) {
    const CMatrix composite = P.composite();
    if (composite.rows() != H.entries.rows() || composite.cols() != H.entries.cols())
        throw ConfigError("precoder dimensions do not match the channel");
    const CMatrix T = H.entries.adjoint() * composite;
    std::vector<LinkGains> out(static_cast<std::size_t>(T.rows()));
    for (Eigen::Index k = 0; k < T.rows(); ++k) {
        auto &g = out[static_cast<std::size_t>(k)];
        g.signal = std::norm(T(k, k));
        for (Eigen::Index j = 0; j < T.cols(); ++j)
            if (j != k)
                g.interference += std::norm(T(k, j));
        g.noise = 1.0;
    }
    return out;
}

inline std::vector<SinrSample> downlink_sinr(const ChannelMatrix &H, const DownlinkPrecoders &P, double gamma) {
    if (!(gamma > 0.0))
        throw ConfigError("SNR must be positive");
    const auto gains = downlink_gains(H, P);
    std::vector<SinrSample> out;
    out.reserve(gains.size());
    for (std::size_t k = 0; k < gains.size(); ++k)
        out.push_back(gains[k].at(gamma, k));
    return out;
}

// Monte Carlo estimate of the ergodic rate E[log2(1 + SINR)].
//
// `standard_error` is the standard error of `per_user_rate`, computed from the
// per-trial user averages (users within a trial are not independent).
// `closed_form` holds the matching per-user large-array approximation when one
// exists (uplink, Rayleigh, N_RF = K).
struct RateEstimate {
    double gamma = 0.0;
    std::size_t users = 0;
    std::size_t trials = 0;
    double per_user_rate = 0.0;
    double sum_rate = 0.0;
    double standard_error = 0.0;
    double sum_rate_stderr = 0.0;
    std::optional<double> closed_form;
    std::size_t rejected_draws = 0;
};

struct RateCurveRequest {
    SystemConfig config;
    ChannelSpec channel{};
    Direction direction = Direction::uplink;
    std::vector<Scheme> schemes;
    std::vector<double> gammas;
    std::size_t trials = 2000;
    std::size_t workers = 0; // 0: default_worker_count()
};

namespace detail {

inline std::vector<LinkGains> scheme_gains(const SystemConfig &config, Direction direction, Scheme scheme,
                                           const ChannelMatrix &H) {
    if (direction == Direction::uplink) {
        const AnalogCombiner A = design_analog_combiner(H, config);
        const DigitalCombiner W = design_digital_combiner(effective_channel(A, H), scheme);
        return uplink_gains(H, A, W);
    }
    return downlink_gains(H, design_downlink_precoders(H, config, scheme));
}

} // namespace detail

// Evaluates every (scheme, SNR) pair on the same channel draws. Trial t uses
// Substream(seed, t, 0); a scheme that finds the draw singular moves on to
// attempts 1, 2, ... of that trial without affecting the other schemes.
// Returns estimates indexed [scheme][gamma].
inline std::vector<std::vector<RateEstimate>> monte_carlo_rate_curve(const RateCurveRequest &req) {
    if (req.trials == 0)
        throw ConfigError("trial count must be at least 1");
    if (req.schemes.empty() || req.gammas.empty())
        throw ConfigError("at least one scheme and one SNR are required");
    for (double g : req.gammas)
        if (!(g > 0.0) || !std::isfinite(g))
            throw ConfigError("SNR values must be positive and finite");
    req.config.require_one_chain_per_user("Monte Carlo rate estimation");
    if (req.channel.model == ChannelModel::mmwave)
        req.channel.mmwave.validate();

    const std::size_t n_schemes = req.schemes.size();
    const std::size_t n_gammas = req.gammas.size();
    const std::size_t n_blocks = (req.trials + kBlockSize - 1) / kBlockSize;
    const double users = static_cast<double>(req.config.users());

    struct Block {
        std::vector<RunningStats> stats;
        std::vector<std::size_t> rejected;
    };
    std::vector<Block> blocks(n_blocks);

    parallel_for(
        n_blocks,
        [&](std::size_t b) {
            Block &blk = blocks[b];
            blk.stats.assign(n_schemes * n_gammas, {});
            blk.rejected.assign(n_schemes, 0);
            const std::size_t first = b * kBlockSize;
            const std::size_t last = std::min(req.trials, first + kBlockSize);
            for (std::size_t t = first; t < last; ++t) {
                Substream stream(req.config.seed(), t, 0);
                const ChannelMatrix H0 = generate_channel(req.config, req.channel, stream);
                for (std::size_t s = 0; s < n_schemes; ++s) {
                    std::vector<LinkGains> gains;
                    for (std::size_t attempt = 0;; ++attempt) {
                        try {
                            if (attempt == 0) {
                                gains = detail::scheme_gains(req.config, req.direction, req.schemes[s], H0);
                            } else {
                                Substream redraw(req.config.seed(), t, attempt);
                                gains = detail::scheme_gains(req.config, req.direction, req.schemes[s],
                                                             generate_channel(req.config, req.channel, redraw));
                            }
                            break;
                        } catch (const SingularMatrixError &) {
                            ++blk.rejected[s];
                            if (attempt + 1 >= kMaxRedraws)
                                throw;
                        }
                    }
                    for (std::size_t g = 0; g < n_gammas; ++g) {
                        double acc = 0.0;
                        for (std::size_t k = 0; k < gains.size(); ++k)
                            acc += std::log1p(gains[k].at(req.gammas[g], k).sinr);
                        blk.stats[s * n_gammas + g].push(acc / (users * std::numbers::ln2));
                    }
                }
            }
        },
        req.workers);

    std::vector<RunningStats> total(n_schemes * n_gammas);
    std::vector<std::size_t> rejected(n_schemes, 0);
    for (const Block &blk : blocks) {
        for (std::size_t i = 0; i < total.size(); ++i)
            total[i].merge(blk.stats[i]);
        for (std::size_t s = 0; s < n_schemes; ++s)
            rejected[s] += blk.rejected[s];
    }

    const bool has_closed_form = req.direction == Direction::uplink && req.channel.model == ChannelModel::rayleigh;
    std::vector<std::vector<RateEstimate>> out(n_schemes, std::vector<RateEstimate>(n_gammas));
    for (std::size_t s = 0; s < n_schemes; ++s) {
        for (std::size_t g = 0; g < n_gammas; ++g) {
            const RunningStats &st = total[s * n_gammas + g];
            RateEstimate &e = out[s][g];
            e.gamma = req.gammas[g];
            e.users = req.config.users();
            e.trials = st.count;
            e.per_user_rate = st.mean;
            e.sum_rate = users * st.mean;
            e.standard_error = st.standard_error();
            e.sum_rate_stderr = users * e.standard_error;
            e.rejected_draws = rejected[s];
            if (has_closed_form)
                e.closed_form = closed_form::rate(req.schemes[s], req.gammas[g], req.config.subarray_size(),
                                                  req.config.users());
        }
    }
    return out;
}

inline RateEstimate monte_carlo_rate(const SystemConfig &config, const ChannelSpec &channel, Scheme scheme,
                                     std::size_t trials, std::size_t workers = 0) {
    return monte_carlo_rate_curve({config, channel, Direction::uplink, {scheme}, {config.gamma()}, trials, workers})
        .front()
        .front();
}

inline RateEstimate monte_carlo_downlink_rate(const SystemConfig &config, const ChannelSpec &channel, Scheme scheme,
                                              std::size_t trials, std::size_t workers = 0) {
    return monte_carlo_rate_curve({config, channel, Direction::downlink, {scheme}, {config.gamma()}, trials, workers})
        .front()
        .front();
}

} // namespace hmimo

#endif
