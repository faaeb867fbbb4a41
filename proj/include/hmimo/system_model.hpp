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

#ifndef HMIMO_SYSTEM_MODEL_HPP
#define HMIMO_SYSTEM_MODEL_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "hmimo/config.hpp"
#include "hmimo/random.hpp"

namespace hmimo {

// M x K uplink channel; column k holds user k's per-antenna coefficients.
struct ChannelMatrix {
    CMatrix entries;
    ChannelModel model = ChannelModel::rayleigh;

    std::size_t antennas() const noexcept { return static_cast<std::size_t>(entries.rows()); }
    std::size_t users() const noexcept { return static_cast<std::size_t>(entries.cols()); }
    auto column(std::size_t k) const { return entries.col(static_cast<Eigen::Index>(k)); }
};

// Uniform linear array response for a path at angle `phi` (radians).
// Entry m is exp(-j 2 pi (d/lambda) m sin(phi)) / sqrt(M): the Hermitian of
// the row-vector response stored as a column.
inline CVector steering_vector(std::size_t antennas, double spacing_ratio, double phi) {
    if (antennas == 0)
        throw ConfigError("steering vector needs at least one antenna");
    const double scale = 1.0 / std::sqrt(static_cast<double>(antennas));
    const double step = 2.0 * std::numbers::pi * spacing_ratio * std::sin(phi);
    CVector a(static_cast<Eigen::Index>(antennas));
    for (Eigen::Index m = 0; m < a.size(); ++m)
        a[m] = std::polar(scale, -step * static_cast<double>(m));
    return a;
}

// i.i.d. CN(0, 1) entries, drawn column by column.
inline ChannelMatrix generate_rayleigh_channel(const SystemConfig &config, Substream &stream) {
    const auto M = static_cast<Eigen::Index>(config.antennas());
    const auto K = static_cast<Eigen::Index>(config.users());
    ChannelMatrix H{CMatrix(M, K), ChannelModel::rayleigh};
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index i = 0; i < M; ++i)
            H.entries(i, k) = stream.complex_normal();
    return H;
}

/// One user's geometric channel sqrt(M/L) * sum_l gains[l] a(angles[l]).
inline CVector geometric_channel(std::size_t antennas, double spacing_ratio, const std::vector<cdouble> &gains,
                                 const std::vector<double> &angles) {
    if (gains.empty() || gains.size() != angles.size())
        throw ConfigError("geometric channel needs one angle per path gain");
    CVector h = CVector::Zero(static_cast<Eigen::Index>(antennas));
    for (std::size_t l = 0; l < gains.size(); ++l)
        h += gains[l] * steering_vector(antennas, spacing_ratio, angles[l]);
    return h * std::sqrt(static_cast<double>(antennas) / static_cast<double>(gains.size()));
}

// Geometric channel with alpha_l ~ CN(0, 1) and phi_l ~ U[0, 2 pi). Per user,
// every path draws its gain then its angle.
inline ChannelMatrix generate_mmwave_channel(const SystemConfig &config, const MmWaveParams &params,
                                             Substream &stream) {
    params.validate();
    const auto M = static_cast<Eigen::Index>(config.antennas());
    const auto K = static_cast<Eigen::Index>(config.users());

    ChannelMatrix H{CMatrix(M, K), ChannelModel::mmwave};
    std::vector<cdouble> gains(params.paths);
    std::vector<double> angles(params.paths);
    for (Eigen::Index k = 0; k < K; ++k) {
        for (std::size_t l = 0; l < params.paths; ++l) {
            gains[l] = stream.complex_normal();
            angles[l] = 2.0 * std::numbers::pi * stream.uniform();
        }
        H.entries.col(k) = geometric_channel(config.antennas(), params.spacing_ratio, gains, angles);
    }
    return H;
}

inline ChannelMatrix generate_channel(const SystemConfig &config, const ChannelSpec &spec, Substream &stream) {
    return spec.model == ChannelModel::rayleigh ? generate_rayleigh_channel(config, stream)
                                                : generate_mmwave_channel(config, spec.mmwave, stream);
}

} // namespace hmimo

#endif
