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

#ifndef HMIMO_CLOSED_FORM_HPP
#define HMIMO_CLOSED_FORM_HPP

// Large-array approximations of the per-user uplink ergodic rate for the
// sub-connected architecture with one RF chain per user, the SNR thresholds
// separating analog-only from hybrid detection, and the zero-forcing SINR
// density. All rates are in bits/s/Hz per user; gamma is the linear SNR.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include "hmimo/beamformers.hpp"
#include "hmimo/config.hpp"

namespace hmimo::closed_form {

namespace detail {

inline void check_domain(double gamma, std::size_t N, std::size_t K) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw ConfigError("SNR must be positive and finite");
    if (N == 0 || K == 0)
        throw ConfigError("subarray size and user count must be positive");
}

// pi N / 4: the mean coherent gain E[g_kk]^2 of one subarray.
inline double coherent_gain(std::size_t N) { return std::numbers::pi * static_cast<double>(N) / 4.0; }

} // namespace detail

/// Analog-only detection (identity digital stage).
inline double rate_analog(double gamma, std::size_t N, std::size_t K) {
    detail::check_domain(gamma, N, K);
    const double x = detail::coherent_gain(N);
    const double k = static_cast<double>(K);
    return std::log2(1.0 + gamma * x / (gamma * (k - 1.0) + 1.0));
}

/// Hybrid detection with MRC digital combining.
inline double rate_mrc_hybrid(double gamma, std::size_t N, std::size_t K) {
    detail::check_domain(gamma, N, K);
    const double x = detail::coherent_gain(N);
    const double k = static_cast<double>(K);
    const double num = gamma * (x + k) * (x + k);
    const double den = gamma * (k - 1.0) * (2.0 * x + k) + x + k;
    return std::log2(1.0 + num / den);
}

/// Mean zero-forcing SINR gamma (pi N / (4K) + 1) for N_RF = K.
inline double zf_mean_sinr(double gamma, std::size_t N, std::size_t K) {
    detail::check_domain(gamma, N, K);
    return gamma * (detail::coherent_gain(N) / static_cast<double>(K) + 1.0);
}

/// Hybrid detection with ZF digital combining, N_RF = K.
inline double rate_zf_hybrid(double gamma, std::size_t N, std::size_t K) {
    return std::log2(1.0 + zf_mean_sinr(gamma, N, K));
}

inline double rate(Scheme scheme, double gamma, std::size_t N, std::size_t K) {
    switch (scheme) {
    case Scheme::analog: return rate_analog(gamma, N, K);
    case Scheme::mrc: return rate_mrc_hybrid(gamma, N, K);
    case Scheme::zf: return rate_zf_hybrid(gamma, N, K);
    }
    throw ConfigError("unknown scheme");
}

// Approximate density of the per-user ZF SINR: a Gamma law with shape
// N_RF - K + 1 and scale gamma (pi N / (4K) + 1). With N_RF = K it is an
// exponential.
inline double zf_sinr_pdf(double sinr, double gamma, std::size_t N, std::size_t K, std::size_t rf_chains) {
    detail::check_domain(gamma, N, K);
    if (rf_chains < K)
        throw ConfigError("SINR density requires N_RF >= K");
    if (!(sinr >= 0.0))
        throw ConfigError("SINR must be nonnegative");
    const double scale = zf_mean_sinr(gamma, N, K);
    const double shape_minus_one = static_cast<double>(rf_chains - K);
    const double t = sinr / scale;
    if (shape_minus_one == 0.0)
        return std::exp(-t) / scale;
    if (t == 0.0)
        return 0.0;
    return std::exp(-t + shape_minus_one * std::log(t) - std::lgamma(shape_minus_one + 1.0)) / scale;
}

/// Cumulative distribution matching zf_sinr_pdf (integer shape, closed form).
inline double zf_sinr_cdf(double sinr, double gamma, std::size_t N, std::size_t K, std::size_t rf_chains) {
    detail::check_domain(gamma, N, K);
    if (rf_chains < K)
        throw ConfigError("SINR density requires N_RF >= K");
    if (sinr <= 0.0)
        return 0.0;
    const double t = sinr / zf_mean_sinr(gamma, N, K);
    // P(n + 1, t) = 1 - e^{-t} sum_{i=0}^{n} t^i / i!
    double term = 1.0;
    double partial = 1.0;
    for (std::size_t i = 1; i <= rf_chains - K; ++i) {
        term *= t / static_cast<double>(i);
        partial += term;
    }
    return 1.0 - std::exp(-t) * partial;
}

/// Hybrid minus analog-only rate for the given digital scheme.
inline double rate_gap(double gamma, std::size_t N, std::size_t K, Scheme scheme) {
    if (scheme == Scheme::analog)
        throw ConfigError("rate gap compares a hybrid scheme (mrc or zf) against analog detection");
    return rate(scheme, gamma, N, K) - rate_analog(gamma, N, K);
}

/// Dominance bound pi (sqrt(5) - 1) M / 8 on K^2.
inline double dominance_bound(std::size_t M) {
    return std::numbers::pi * (std::sqrt(5.0) - 1.0) * static_cast<double>(M) / 8.0;
}

struct ThresholdReport {
    std::size_t antennas = 0;
    std::size_t users = 0;
    std::size_t subarray_size = 0;

    // SNR above which analog-only beats MRC hybrid; empty when MRC hybrid
    // wins at every SNR.
    std::optional<double> eta1;
    // SNR above which ZF hybrid beats analog-only; may be nonpositive, in
    // which case ZF wins at every SNR.
    double eta2 = 0.0;
    bool mrc_always_dominates = false;
    double k_squared = 0.0;
    double bound = 0.0;

    std::optional<double> eta1_db() const {
        if (eta1 && *eta1 > 0.0)
            return linear_to_db(*eta1);
        return std::nullopt;
    }
    std::optional<double> eta2_db() const {
        if (eta2 > 0.0)
            return linear_to_db(eta2);
        return std::nullopt;
    }
};

inline ThresholdReport thresholds(std::size_t M, std::size_t K) {
    if (K == 0 || M == 0)
        throw ConfigError("antenna and user counts must be positive");
    if (K == 1)
        throw ConfigError("thresholds undefined for single user");
    if (M % K != 0)
        throw ConfigError("antenna count " + std::to_string(M) + " is not divisible by user count " +
                          std::to_string(K));

    ThresholdReport r;
    r.antennas = M;
    r.users = K;
    r.subarray_size = M / K;

    const double x = detail::coherent_gain(r.subarray_size);
    const double k = static_cast<double>(K);
    const double quadratic = x * x - x * k - k * k;
    if (quadratic > 0.0)
        r.eta1 = k * (x + k) / ((k - 1.0) * quadratic);

    const double a = x * (k - 1.0) / k;
    r.eta2 = (a - 1.0) / (a + k - 1.0);

    r.k_squared = k * k;
    r.bound = dominance_bound(M);
    r.mrc_always_dominates = r.k_squared > r.bound;
    return r;
}

/// High-SNR MRC rate gap as a function of K^2 / M: 4 K^2 / (pi ln2 M) - 1.
inline double high_snr_gap_asymptote(double k_squared_over_m) {
    return 4.0 / (std::numbers::pi * std::numbers::ln2) * k_squared_over_m - 1.0;
}

inline double high_snr_gap_asymptote(std::size_t M, std::size_t K) {
    if (K < 2)
        throw ConfigError("high-SNR gap requires at least two users");
    if (M == 0)
        throw ConfigError("antenna count must be positive");
    const double k = static_cast<double>(K);
    return high_snr_gap_asymptote(k * k / static_cast<double>(M));
}

} // namespace hmimo::closed_form

#endif
