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

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hmimo/moment_oracles.hpp"

using namespace hmimo;
using namespace hmimo::moments;

namespace {

const MomentCheckResult &find(const std::vector<MomentCheckResult> &rs, const std::string &name) {
    const auto it = std::find_if(rs.begin(), rs.end(), [&](const auto &r) { return r.name == name; });
    if (it == rs.end())
        throw std::runtime_error("missing check " + name);
    return *it;
}

// Raw moments E[g^n], n = 0..4, of g = (1/sqrt N) sum_i |h_i| with h_i ~ CN(0, 1),
// built by expanding (S + R)^n one Rayleigh term at a time; E R^n = Gamma(1 + n/2).
std::array<double, 5> exact_diag_moments(std::size_t N) {
    std::array<double, 5> r{}, s{1.0, 0.0, 0.0, 0.0, 0.0};
    for (int n = 0; n < 5; ++n)
        r[n] = std::tgamma(1.0 + n / 2.0);
    for (std::size_t i = 0; i < N; ++i) {
        std::array<double, 5> next{};
        for (int n = 0; n < 5; ++n) {
            double binom = 1.0;
            for (int j = 0; j <= n; ++j) {
                next[n] += binom * s[j] * r[n - j];
                binom = binom * (n - j) / (j + 1);
            }
        }
        s = next;
    }
    for (int n = 0; n < 5; ++n)
        s[n] /= std::pow(static_cast<double>(N), n / 2.0);
    return s;
}

} // namespace

TEST(ExactOracle, LowOrderMomentsMatchLimitFormulas) {
    // Mean, variance and second moment of g_kk are exact for every N.
    for (std::size_t N : {1u, 4u, 12u, 64u}) {
        const auto m = exact_diag_moments(N);
        const double pi = std::numbers::pi;
        EXPECT_NEAR(m[1], std::sqrt(pi * N) / 2.0, 1e-12 * m[1]);
        EXPECT_NEAR(m[2], pi * N / 4.0 + 1.0 - pi / 4.0, 1e-12 * m[2]);
    }
}

TEST(DiagMoments, LargeSubarrayPasses) {
    const auto rs = check_diag_moments(64, 8, 100000);
    EXPECT_TRUE(all_asserted_pass(rs));
    const auto &mean = find(rs, "diag_mean");
    EXPECT_NEAR(mean.target, 7.08982, 1e-5);
    EXPECT_GE(mean.estimate, 7.05);
    EXPECT_LE(mean.estimate, 7.12);
    EXPECT_LE(mean.error, 0.005);
    EXPECT_NEAR(find(rs, "diag_variance").target, 0.214601, 1e-6);
    EXPECT_LE(find(rs, "diag_variance").error, 0.03);
    for (const auto &r : rs)
        EXPECT_TRUE(r.asserted);
}

TEST(DiagMoments, SmallSubarrayIsInformational) {
    const auto rs = check_diag_moments(4, 8, 20000);
    for (const auto &r : rs) {
        EXPECT_FALSE(r.asserted);
        EXPECT_EQ(r.tolerance, kTolSmallSubarray);
    }
    EXPECT_TRUE(all_asserted_pass(rs));
}

TEST(DiagMoments, RejectsTooFewSamples) {
    EXPECT_THROW(check_diag_moments(64, 8, 0), ConfigError);
    EXPECT_THROW(check_diag_moments(64, 8, kMinSamples - 1), ConfigError);
    EXPECT_THROW(check_mrc_moments(12, 1, 20000), ConfigError);
}

TEST(DiagMoments, ErrorShrinksWithSamples) {
    auto total = [](std::size_t n) {
        double sum = 0.0;
        for (const auto &r : check_diag_moments(32, 4, n, 3))
            sum += r.error / r.tolerance;
        return sum;
    };
    const double e1 = total(10000), e2 = total(40000), e3 = total(160000);
    EXPECT_LE(std::min(e2, e3), e1);
    EXPECT_LE(e3, e1);
}

TEST(MrcMoments, AllAssertedPass) {
    const auto rs = check_mrc_moments(12, 10, 100000);
    for (const auto &r : rs)
        EXPECT_TRUE(!r.asserted || r.pass) << r.name << " estimate " << r.estimate << " target " << r.target;
    EXPECT_NEAR(find(rs, "mrc_omega2").target, 27.2788, 1e-4);
    EXPECT_NEAR(find(rs, "mrc_norm_mean").target, 18.6394, 1e-4);
    const auto &cov = find(rs, "mrc_offdiag_covariance");
    EXPECT_EQ(cov.kind, ErrorKind::absolute);
    EXPECT_EQ(cov.target, 0.0);
}

TEST(MrcMoments, FourthOrderEstimatesTrackExactFiniteSubarrayValues) {
    // The limit targets drop O(1) terms; the estimators must agree with the
    // exact finite-N moments far more tightly than with the limits.
    const auto rs = check_mrc_moments(12, 10, 100000);
    const auto m = exact_diag_moments(12);
    const double var_sq = m[4] - m[2] * m[2];
    const double cov = m[3] - m[2] * m[1];
    EXPECT_NEAR(var_sq, 8.40576, 1e-4);
    EXPECT_NEAR(cov, 1.33576, 1e-4);
    EXPECT_NEAR(find(rs, "mrc_diag_square_variance").estimate / var_sq, 1.0, 0.01);
    EXPECT_NEAR(find(rs, "mrc_diag_square_covariance").estimate / cov, 1.0, 0.02);
}

TEST(MrcMoments, OffDiagonalPowerVarianceIsExactlyUnit) {
    // g_{k,i}, i != k, is exactly CN(0, 1) for any N, so Var|g_{k,i}|^2 = 1.
    const auto rs = check_mrc_moments(2, 4, 100000, 5);
    EXPECT_NEAR(find(rs, "mrc_offdiag_variance").estimate, 1.0, 0.03);
}

TEST(ZfDistribution, MeanMatchesClosedForm) {
    const auto rs = check_zf_distribution(10.0, 12, 10, 100000);
    const auto &mean = find(rs, "zf_sinr_mean");
    EXPECT_NEAR(mean.target, 19.42478, 1e-5);
    EXPECT_TRUE(mean.pass) << "estimate " << mean.estimate << " target " << mean.target;
    EXPECT_FALSE(find(rs, "zf_sinr_ks").asserted);
}

TEST(ZfDistribution, TwoUserMeanMatchesClosedForm) {
    const auto rs = check_zf_distribution(1.0, 50, 2, 100000);
    const auto &mean = find(rs, "zf_sinr_mean");
    EXPECT_NEAR(mean.target, 20.63495, 1e-5);
    EXPECT_TRUE(mean.pass) << "estimate " << mean.estimate << " target " << mean.target;
}

TEST(ZfDistribution, SamplesEqualInverseGramDiagonal) {
    const auto s = sample_zf_sinr(2.0, 6, 3, 20, 8, 1);
    const SystemConfig cfg(18, 3, 2.0, 8);
    for (std::size_t d = 0; d < s.size(); ++d) {
        Substream st(8, d, 0);
        const auto H = generate_rayleigh_channel(cfg, st);
        const auto G = effective_channel(design_analog_combiner(H, cfg), H).entries;
        const CMatrix inv = (G.adjoint() * G).inverse();
        EXPECT_NEAR(s[d], 2.0 / inv(0, 0).real(), 1e-9 * s[d]);
    }
}

TEST(Ks, UniformGrid) {
    std::vector<double> x;
    for (int i = 0; i < 100; ++i)
        x.push_back((i + 0.5) / 100.0);
    EXPECT_NEAR(ks_statistic(x, [](double v) { return v; }), 0.005, 1e-12);
    EXPECT_NEAR(ks_statistic(x, [](double) { return 0.0; }), 1.0, 1e-12);
}

TEST(SampleStatistics, CovarianceAndChecks) {
    const std::vector<double> x{1, 2, 3, 4}, y{2, 4, 6, 8};
    EXPECT_NEAR(detail::sample_covariance(x, y).value, 10.0 / 3.0, 1e-12);
    const auto r = relative_check("r", 2.0, 2.1, 0.04, 10);
    EXPECT_NEAR(r.error, 0.05, 1e-12);
    EXPECT_FALSE(r.pass);
    const auto a = absolute_check("a", 0.0, -0.1, 0.2, 10, false);
    EXPECT_TRUE(a.pass);
    EXPECT_TRUE(all_asserted_pass({a, a}));
    EXPECT_FALSE(all_asserted_pass({r, a}));
}
