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

#ifndef HMIMO_MOMENT_ORACLES_HPP
#define HMIMO_MOMENT_ORACLES_HPP

// Monte Carlo checks of the effective-channel statistics behind the
// closed-form rates. Every check draws Rayleigh channels, applies the
// phase-aligned analog combiner, and compares a sample statistic of G = A H
// with its analytical target. Diagonal entries g_kk of different users come
// from disjoint antenna blocks and independent columns, so statistics of g_kk
// pool all K users of a draw; the remaining checks use users 0, 1 and 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "hmimo/beamformers.hpp"
#include "hmimo/closed_form.hpp"
#include "hmimo/config.hpp"
#include "hmimo/parallel.hpp"
#include "hmimo/random.hpp"
#include "hmimo/system_model.hpp"

namespace hmimo::moments {

enum class ErrorKind { relative, absolute };

struct MomentCheckResult {
    std::string name;
    double target = 0.0;
    double estimate = 0.0;
    double error = 0.0; // relative or absolute, see kind
    ErrorKind kind = ErrorKind::relative;
    double tolerance = 0.0;
    std::size_t samples = 0;
    bool asserted = true;
    bool pass = false;
};

inline constexpr std::size_t kMinSamples = 10'000;

// Tolerances. Means are tight, second moments of g_kk and fourth moments of
// the effective channel looser.
inline constexpr double kTolMeanDiag = 0.005;
inline constexpr double kTolSecondMoment = 0.01;
inline constexpr double kTolVariance = 0.03;
inline constexpr double kTolMeanNorm = 0.02;
inline constexpr double kTolFourthMoment = 0.03;
inline constexpr double kTolZfMean = 0.02;
inline constexpr double kTolSmallSubarray = 0.05;
inline constexpr double kCovarianceSigmas = 3.0;
inline constexpr double kKsReference = 0.05;

/// Subarrays smaller than this are reported but never fail a run.
inline constexpr std::size_t kMinAssertedSubarray = 8;

inline MomentCheckResult relative_check(std::string name, double target, double estimate, double tolerance,
                                        std::size_t samples, bool asserted = true) {
    MomentCheckResult r{std::move(name), target, estimate, 0.0, ErrorKind::relative, tolerance, samples, asserted};
    r.error = std::abs(estimate - target) / std::abs(target);
    r.pass = r.error <= tolerance;
    return r;
}

inline MomentCheckResult absolute_check(std::string name, double target, double estimate, double tolerance,
                                        std::size_t samples, bool asserted = true) {
    MomentCheckResult r{std::move(name), target, estimate, 0.0, ErrorKind::absolute, tolerance, samples, asserted};
    r.error = std::abs(estimate - target);
    r.pass = r.error <= tolerance;
    return r;
}

inline bool all_asserted_pass(const std::vector<MomentCheckResult> &results) {
    return std::all_of(results.begin(), results.end(), [](const auto &r) { return !r.asserted || r.pass; });
}

namespace detail {

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;
};

inline SampleMoments sample_moments(const std::vector<double> &x) {
    RunningStats s;
    for (double v : x)
        s.push(v);
    return {s.mean, s.variance()};
}

struct CovarianceEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

// Unbiased sample covariance with the standard error of the mean of the
// centered products.
inline CovarianceEstimate sample_covariance(const std::vector<double> &x, const std::vector<double> &y) {
    const double mx = sample_moments(x).mean;
    const double my = sample_moments(y).mean;
    RunningStats products;
    for (std::size_t i = 0; i < x.size(); ++i)
        products.push((x[i] - mx) * (y[i] - my));
    const double n = static_cast<double>(x.size());
    return {products.mean * n / (n - 1.0), products.standard_error()};
}

inline void check_samples(std::size_t samples) {
    if (samples < kMinSamples)
        throw ConfigError("moment checks need at least " + std::to_string(kMinSamples) + " samples, got " +
                          std::to_string(samples));
}

// Draws `samples` effective channels and hands each to `record(draw, G)`.
template <typename Record>
void for_each_effective_channel(const SystemConfig &config, std::size_t samples, std::size_t workers,
                                Record &&record) {
    const std::size_t n_blocks = (samples + kBlockSize - 1) / kBlockSize;
    parallel_for(
        n_blocks,
        [&](std::size_t b) {
            const std::size_t last = std::min(samples, (b + 1) * kBlockSize);
            for (std::size_t d = b * kBlockSize; d < last; ++d) {
                Substream stream(config.seed(), d, 0);
                const ChannelMatrix H = generate_rayleigh_channel(config, stream);
                const AnalogCombiner A = design_analog_combiner(H, config);
                record(d, effective_channel(A, H).entries);
            }
        },
        workers);
}

} // namespace detail

/// E[g_kk] = sqrt(pi N)/2, Var[g_kk] = 1 - pi/4, E[g_kk^2] = pi N/4 + 1 - pi/4.
inline std::vector<MomentCheckResult> check_diag_moments(std::size_t N, std::size_t K, std::size_t samples,
                                                         std::uint64_t seed = 1, std::size_t workers = 0) {
    detail::check_samples(samples);
    const SystemConfig config(N * K, K, 1.0, seed);
    std::vector<double> g(samples * K);
    detail::for_each_effective_channel(config, samples, workers, [&](std::size_t d, const CMatrix &G) {
        for (std::size_t k = 0; k < K; ++k)
            g[d * K + k] = G(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
    });

    const auto m = detail::sample_moments(g);
    double second = 0.0;
    for (double v : g)
        second += v * v;
    second /= static_cast<double>(g.size());
    samples = g.size();

    const double pi = std::numbers::pi;
    const double n = static_cast<double>(N);
    const bool asserted = N >= kMinAssertedSubarray;
    auto tol = [&](double t) { return asserted ? t : kTolSmallSubarray; };
    return {
        relative_check("diag_mean", std::sqrt(pi * n) / 2.0, m.mean, tol(kTolMeanDiag), samples, asserted),
        relative_check("diag_variance", 1.0 - pi / 4.0, m.variance, tol(kTolVariance), samples, asserted),
        relative_check("diag_second_moment", pi * n / 4.0 + 1.0 - pi / 4.0, second, tol(kTolSecondMoment), samples,
                       asserted),
    };
}

/// Moments entering the MRC hybrid rate; user k = 0, interferer j = 1.
/// The diagonal-only statistics pool every user of a draw.
inline std::vector<MomentCheckResult> check_mrc_moments(std::size_t N, std::size_t K, std::size_t samples,
                                                        std::uint64_t seed = 1, std::size_t workers = 0) {
    detail::check_samples(samples);
    if (K < 2)
        throw ConfigError("MRC moment checks need at least two users");
    const SystemConfig config(N * K, K, 1.0, seed);

    std::vector<double> norm2(samples), diag(samples * K), diag_sq(samples * K), off_sq(samples),
        off_sq_other(samples), norm4(samples), cross(samples);
    detail::for_each_effective_channel(config, samples, workers, [&](std::size_t d, const CMatrix &G) {
        const double n2 = G.col(0).squaredNorm();
        for (std::size_t u = 0; u < K; ++u) {
            const double gkk = G(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u)).real();
            diag[d * K + u] = gkk;
            diag_sq[d * K + u] = gkk * gkk;
        }
        norm2[d] = n2;
        off_sq[d] = std::norm(G(1, 0));
        off_sq_other[d] = K > 2 ? std::norm(G(2, 0)) : std::norm(G(0, 0));
        norm4[d] = n2 * n2;
        cross[d] = std::norm(G.col(0).dot(G.col(1))); // |g_k^H g_j|^2
    });

    const double pi = std::numbers::pi;
    const double n = static_cast<double>(N);
    const double k = static_cast<double>(K);
    const double c = 1.0 - pi / 4.0;
    const double mean_norm = pi * n / 4.0 + k - pi / 4.0;
    const double omega1 = mean_norm * mean_norm + pi * n * c + 2.0 * c * c + (k - 1.0);
    const double omega2 = pi * n / 2.0 + k - pi / 2.0;

    const auto cov_off = detail::sample_covariance(off_sq, off_sq_other);
    const auto cov_diag = detail::sample_covariance(diag_sq, diag);

    std::vector<MomentCheckResult> out;
    out.push_back(relative_check("mrc_norm_mean", mean_norm, detail::sample_moments(norm2).mean, kTolMeanNorm,
                                 samples));
    out.push_back(absolute_check("mrc_offdiag_covariance", 0.0, cov_off.value,
                                 kCovarianceSigmas * cov_off.standard_error, samples));
    out.push_back(relative_check("mrc_offdiag_variance", 1.0, detail::sample_moments(off_sq).variance,
                                 kTolFourthMoment, samples));
    out.push_back(relative_check("mrc_diag_square_variance", pi * n * c + 2.0 * c * c,
                                 detail::sample_moments(diag_sq).variance, kTolFourthMoment, diag_sq.size()));
    out.push_back(relative_check("mrc_diag_square_covariance", std::sqrt(pi * n) * c, cov_diag.value,
                                 kTolFourthMoment, diag_sq.size()));
    out.push_back(relative_check("mrc_omega1", omega1, detail::sample_moments(norm4).mean, kTolFourthMoment,
                                 samples));
    out.push_back(relative_check("mrc_omega2", omega2, detail::sample_moments(cross).mean, kTolFourthMoment,
                                 samples));
    return out;
}

// One-sample Kolmogorov-Smirnov distance between `sorted` and `cdf`.
template <typename Cdf>
double ks_statistic(const std::vector<double> &sorted, Cdf &&cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Draws of the per-user ZF SINR gamma / [(G^H G)^{-1}]_{00}, singular draws redrawn.
inline std::vector<double> sample_zf_sinr(double gamma, std::size_t N, std::size_t K, std::size_t samples,
                                          std::uint64_t seed = 1, std::size_t workers = 0) {
    const SystemConfig config(N * K, K, gamma, seed);
    std::vector<double> sinr(samples);
    const std::size_t n_blocks = (samples + kBlockSize - 1) / kBlockSize;
    parallel_for(
        n_blocks,
        [&](std::size_t b) {
            const std::size_t last = std::min(samples, (b + 1) * kBlockSize);
            for (std::size_t d = b * kBlockSize; d < last; ++d) {
                for (std::size_t attempt = 0;; ++attempt) {
                    Substream stream(config.seed(), d, attempt);
                    const ChannelMatrix H = generate_rayleigh_channel(config, stream);
                    const AnalogCombiner A = design_analog_combiner(H, config);
                    try {
                        const CMatrix W = design_digital_combiner(effective_channel(A, H), Scheme::zf).entries;
                        sinr[d] = gamma / W.row(0).squaredNorm();
                        break;
                    } catch (const SingularMatrixError &) {
                        if (attempt + 1 >= kMaxRedraws)
                            throw;
                    }
                }
            }
        },
        workers);
    return sinr;
}

// Sample mean of the ZF SINR against gamma (pi N/(4K) + 1), plus the KS
// distance to the exponential law (informational).
inline std::vector<MomentCheckResult> check_zf_distribution(double gamma, std::size_t N, std::size_t K,
                                                            std::size_t samples, std::uint64_t seed = 1,
                                                            std::size_t workers = 0) {
    detail::check_samples(samples);
    auto sinr = sample_zf_sinr(gamma, N, K, samples, seed, workers);
    const double target = closed_form::zf_mean_sinr(gamma, N, K);
    const double mean = detail::sample_moments(sinr).mean;

    std::sort(sinr.begin(), sinr.end());
    const double ks =
        ks_statistic(sinr, [&](double x) { return closed_form::zf_sinr_cdf(x, gamma, N, K, K); });

    return {
        relative_check("zf_sinr_mean", target, mean, kTolZfMean, samples),
        absolute_check("zf_sinr_ks", 0.0, ks, kKsReference, samples, false),
    };
}

} // namespace hmimo::moments

#endif
