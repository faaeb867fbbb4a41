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

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "hmimo/beamformers.hpp"
#include "hmimo/parallel.hpp"
#include "hmimo/system_model.hpp"

using namespace hmimo;

namespace {

ChannelMatrix draw(const SystemConfig &cfg, std::uint64_t d) {
    Substream s(cfg.seed(), d);
    return generate_rayleigh_channel(cfg, s);
}

} // namespace

TEST(AnalogCombiner, HandExample) {
    const SystemConfig cfg(2, 1, 1.0);
    CMatrix h(2, 1);
    h << cdouble(3, 0), cdouble(0, 4);
    const ChannelMatrix H{h};
    const auto A = design_analog_combiner(H, cfg);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(A.entries(0, 0) - cdouble(r, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(A.entries(0, 1) - cdouble(0, -r)), 0.0, 1e-15);
    const auto G = effective_channel(A, H).entries;
    ASSERT_EQ(G.rows(), 1);
    EXPECT_NEAR(std::abs(G(0, 0) - cdouble(7.0 * r, 0)), 0.0, 1e-14);
}

TEST(AnalogCombiner, StructureOnRandomDraws) {
    const SystemConfig cfg(96, 8, 1.0, 2);
    const std::size_t N = cfg.subarray_size();
    for (std::uint64_t d = 0; d < 200; ++d) {
        const auto H = draw(cfg, d);
        const auto A = design_analog_combiner(H, cfg);
        const CMatrix AAh = A.entries * A.entries.adjoint();
        EXPECT_LT((AAh - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
        for (Eigen::Index k = 0; k < 8; ++k) {
            for (Eigen::Index i = 0; i < 96; ++i) {
                const bool inside = i / static_cast<Eigen::Index>(N) == k;
                const double mag = std::abs(A.entries(k, i));
                if (inside)
                    ASSERT_NEAR(mag, 1.0 / std::sqrt(double(N)), 1e-14);
                else
                    ASSERT_EQ(mag, 0.0);
            }
        }
        const auto G = effective_channel(A, H).entries;
        for (Eigen::Index k = 0; k < 8; ++k) {
            EXPECT_GE(G(k, k).real(), 0.0);
            EXPECT_NEAR(G(k, k).imag(), 0.0, 1e-12);
        }
        // block-sparse product agrees with the dense one
        EXPECT_LT((G - A.entries * H.entries).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(AnalogCombiner, UnitSubarrayPreservesMagnitude) {
    const SystemConfig cfg(5, 5, 1.0, 4);
    const auto H = draw(cfg, 0);
    const auto G = effective_channel(design_analog_combiner(H, cfg), H).entries;
    for (Eigen::Index k = 0; k < 5; ++k)
        EXPECT_NEAR(std::abs(G(k, k)), std::abs(H.entries(k, k)), 1e-14);
}

TEST(AnalogCombiner, ZeroEntryGetsUnitPhase) {
    const SystemConfig cfg(2, 1, 1.0);
    CMatrix h = CMatrix::Zero(2, 1);
    const auto A = design_analog_combiner(ChannelMatrix{h}, cfg);
    EXPECT_NEAR(std::abs(A.entries(0, 0)), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(AnalogCombiner, DimensionMismatch) {
    const SystemConfig cfg(4, 2, 1.0);
    EXPECT_THROW(design_analog_combiner(ChannelMatrix{CMatrix::Zero(6, 2)}, cfg), ConfigError);
    EXPECT_THROW(design_analog_combiner(ChannelMatrix{CMatrix::Zero(4, 2)}, SystemConfig(4, 2, 4, 1.0)),
                 ConfigError);
}

TEST(EffectiveChannel, OffDiagonalPowerIsUnit) {
    const SystemConfig cfg(120, 10, 1.0, 8);
    RunningStats off;
    for (std::uint64_t d = 0; d < 100000; ++d) {
        const auto H = draw(cfg, d);
        const auto G = effective_channel(design_analog_combiner(H, cfg), H).entries;
        off.push(std::norm(G(1, 0)));
    }
    EXPECT_GE(off.mean, 0.98);
    EXPECT_LE(off.mean, 1.02);
}

TEST(DigitalCombiner, IdentityAndMrc) {
    CMatrix G(2, 2);
    G << cdouble(2, 0), cdouble(0, 1), cdouble(0, -1), cdouble(1, 0);
    const auto I = design_digital_combiner({G}, Scheme::analog).entries;
    EXPECT_EQ(I, CMatrix::Identity(2, 2));
    const auto W = design_digital_combiner({G}, Scheme::mrc).entries;
    EXPECT_LT((W - G.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((W - G).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DigitalCombiner, ZeroForcingIsLeftInverse) {
    const SystemConfig cfg(120, 10, 1.0, 3);
    for (std::uint64_t d = 0; d < 200; ++d) {
        const auto H = draw(cfg, d);
        const auto G = effective_channel(design_analog_combiner(H, cfg), H).entries;
        const auto W = design_digital_combiner({G}, Scheme::zf).entries;
        EXPECT_LT((W * G - CMatrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(DigitalCombiner, ZeroForcingRejectsSingularGram) {
    CMatrix G(2, 2);
    G << cdouble(1, 0), cdouble(2, 0), cdouble(2, 0), cdouble(4, 0);
    EXPECT_THROW(design_digital_combiner({G}, Scheme::zf), SingularMatrixError);
    try {
        left_pseudo_inverse(G);
    } catch (const SingularMatrixError &e) {
        EXPECT_GT(e.condition(), kZfConditionLimit);
    }
    EXPECT_THROW(left_pseudo_inverse(CMatrix::Ones(2, 3)), ConfigError);
}

TEST(DigitalCombiner, GramConditionMatchesSingularValues) {
    CMatrix G(2, 2);
    G << cdouble(3, 0), cdouble(0, 0), cdouble(0, 0), cdouble(0.5, 0);
    EXPECT_NEAR(gram_condition(G), 36.0, 1e-12);
}

TEST(SchemeNames, RoundTrip) {
    for (Scheme s : {Scheme::analog, Scheme::mrc, Scheme::zf})
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    EXPECT_EQ(parse_scheme("analog-identity"), Scheme::analog);
    EXPECT_EQ(parse_scheme("analog-only"), Scheme::analog);
    EXPECT_EQ(parse_scheme("mrt"), Scheme::mrc);
    EXPECT_FALSE(parse_scheme("mmse").has_value());
}

TEST(DownlinkPrecoders, UnitTransmitPower) {
    const SystemConfig cfg(64, 8, 1.0, 6);
    for (std::uint64_t d = 0; d < 100; ++d) {
        const auto H = draw(cfg, d);
        for (Scheme s : {Scheme::analog, Scheme::mrc, Scheme::zf}) {
            const auto P = design_downlink_precoders(H, cfg, s);
            EXPECT_NEAR(P.composite().squaredNorm(), 1.0, 1e-10);
            EXPECT_NEAR(P.digital.squaredNorm(), 1.0, 1e-12);
        }
    }
}

TEST(DownlinkPrecoders, ZeroForcingNullsInterference) {
    const SystemConfig cfg(64, 8, 1.0, 6);
    const auto H = draw(cfg, 0);
    const auto P = design_downlink_precoders(H, cfg, Scheme::zf);
    const CMatrix T = H.entries.adjoint() * P.composite();
    for (Eigen::Index k = 0; k < 8; ++k)
        for (Eigen::Index j = 0; j < 8; ++j)
            if (j != k)
                EXPECT_LT(std::abs(T(k, j)), 1e-10 * std::abs(T(k, k)));
}
