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

#ifndef HMIMO_BEAMFORMERS_HPP
#define HMIMO_BEAMFORMERS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "hmimo/config.hpp"
#include "hmimo/system_model.hpp"

namespace hmimo {

// Digital stage applied after the analog combiner. In the downlink, `mrc`
// denotes matched-filter (MRT) precoding and `analog` an identity digital
// precoder.
enum class Scheme { analog, mrc, zf };

inline std::string_view to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::analog: return "analog";
    case Scheme::mrc: return "mrc";
    case Scheme::zf: return "zf";
    }
    return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
    if (name == "analog" || name == "analog-identity" || name == "analog-only")
        return Scheme::analog;
    if (name == "mrc" || name == "mrt")
        return Scheme::mrc;
    if (name == "zf")
        return Scheme::zf;
    return std::nullopt;
}

/// Gram-matrix condition number above which zero-forcing is refused.
inline constexpr double kZfConditionLimit = 1e12;

/// Redraw budget per Monte Carlo draw for singular zero-forcing realizations.
inline constexpr std::size_t kMaxRedraws = 64;

// Sub-connected phase-shifter network, N_RF x M. Row k is supported only on
// antennas [k N, (k + 1) N) and every supported entry has modulus 1/sqrt(N).
struct AnalogCombiner {
    CMatrix entries;
    std::size_t subarray_size = 0;

    std::size_t rf_chains() const noexcept { return static_cast<std::size_t>(entries.rows()); }
    std::size_t antennas() const noexcept { return static_cast<std::size_t>(entries.cols()); }
};

// G = A H, N_RF x K. Column k is user k's channel seen by the RF chains.
struct EffectiveChannel {
    CMatrix entries;
};

// K x N_RF baseband combiner; row k detects user k.
struct DigitalCombiner {
    CMatrix entries;
    Scheme scheme = Scheme::analog;
};

// Phase-align each subarray to its own user: a_{k,i} = h*_{k,i} / (|h_{k,i}| sqrt(N)).
// A zero coefficient gets unit phase so the modulus constraint still holds.
inline AnalogCombiner design_analog_combiner(const ChannelMatrix &H, const SystemConfig &config) {
    config.require_one_chain_per_user("analog combiner design");
    if (H.antennas() != config.antennas() || H.users() != config.users())
        throw ConfigError("channel dimensions do not match the system configuration");

    const auto N = static_cast<Eigen::Index>(config.subarray_size());
    const auto K = static_cast<Eigen::Index>(config.rf_chains());
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));

    AnalogCombiner A{CMatrix::Zero(K, static_cast<Eigen::Index>(config.antennas())), config.subarray_size()};
    for (Eigen::Index k = 0; k < K; ++k) {
        for (Eigen::Index i = k * N; i < (k + 1) * N; ++i) {
            const cdouble h = H.entries(i, k);
            const double mag = std::abs(h);
            A.entries(k, i) = mag > 0.0 ? std::conj(h) * (scale / mag) : cdouble(scale, 0.0);
        }
    }
    return A;
}

inline EffectiveChannel effective_channel(const AnalogCombiner &A, const ChannelMatrix &H) {
    if (A.antennas() != H.antennas())
        throw ConfigError("analog combiner has " + std::to_string(A.antennas()) + " columns but the channel has " +
                          std::to_string(H.antennas()) + " antennas");
    const auto N = static_cast<Eigen::Index>(A.subarray_size);
    const auto rows = static_cast<Eigen::Index>(A.rf_chains());
    if (N == 0 || N * rows != static_cast<Eigen::Index>(A.antennas()))
        return {A.entries * H.entries};
    // Row k of A is zero outside antennas [kN, (k+1)N).
    CMatrix G(rows, H.entries.cols());
    for (Eigen::Index k = 0; k < rows; ++k)
        G.row(k).noalias() = A.entries.block(k, k * N, 1, N) * H.entries.middleRows(k * N, N);
    return {std::move(G)};
}

// Condition number of the Hermitian Gram matrix G^H G from its eigenvalues.
inline double gram_condition(const CMatrix &G) {
    const CMatrix gram = G.adjoint() * G;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const auto &ev = eig.eigenvalues(); // ascending
    const double lmin = ev[0];
    const double lmax = ev[ev.size() - 1];
    if (!(lmin > 0.0) || !std::isfinite(lmax))
        return std::numeric_limits<double>::infinity();
    return lmax / lmin;
}

// Left pseudo-inverse (G^H G)^{-1} G^H, solved through a Householder QR of G.
inline CMatrix left_pseudo_inverse(const CMatrix &G) {
    if (G.rows() < G.cols())
        throw ConfigError("zero-forcing needs at least as many RF chains as users");
    const double cond = gram_condition(G);
    if (!(cond <= kZfConditionLimit))
        throw SingularMatrixError("zero-forcing Gram matrix is singular (condition " + std::to_string(cond) + ")",
                                  cond);
    return G.householderQr().solve(CMatrix::Identity(G.rows(), G.rows()));
}

inline DigitalCombiner design_digital_combiner(const EffectiveChannel &G, Scheme scheme) {
    const auto &g = G.entries;
    switch (scheme) {
    case Scheme::analog:
        if (g.rows() != g.cols())
            throw ConfigError("identity digital stage requires N_RF = K");
        return {CMatrix::Identity(g.cols(), g.rows()), scheme};
    case Scheme::mrc:
        return {g.adjoint(), scheme};
    case Scheme::zf:
        return {left_pseudo_inverse(g), scheme};
    }
    throw ConfigError("unknown combiner scheme");
}

// Downlink transmit chain x = sqrt(p) * analog * digital * s. User k receives
// h_k^H x, so with analog = A^H its effective channel row is g_k^H.
struct DownlinkPrecoders {
    CMatrix analog;  // M x N_RF, equal to A^H
    CMatrix digital; // N_RF x K, unit Frobenius norm
    Scheme scheme = Scheme::analog;

    CMatrix composite() const { return analog * digital; }
};

// Sum-power normalization: the digital precoder (identity, G, or G (G^H G)^{-1})
// is scaled to unit Frobenius norm. Since A A^H = I the composite precoder is
// then unit-norm too, and total radiated power is exactly p.
inline DownlinkPrecoders design_downlink_precoders(const ChannelMatrix &H, const SystemConfig &config,
                                                   Scheme scheme) {
    const AnalogCombiner A = design_analog_combiner(H, config);
    const CMatrix G = effective_channel(A, H).entries;

    CMatrix F;
    switch (scheme) {
    case Scheme::analog: F = CMatrix::Identity(G.rows(), G.cols()); break;
    case Scheme::mrc: F = G; break;
    case Scheme::zf: F = left_pseudo_inverse(G).adjoint(); break;
    }
    const double norm = F.norm();
    if (!(norm > 0.0))
        throw SingularMatrixError("downlink precoder has zero norm", std::numeric_limits<double>::infinity());
    return {A.entries.adjoint(), F / norm, scheme};
}

} // namespace hmimo

#endif
