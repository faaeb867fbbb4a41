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

#ifndef HMIMO_CONFIG_HPP
#define HMIMO_CONFIG_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hmimo {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using cdouble = std::complex<double>;

/// Raised for any parameter or dimension that violates a documented precondition.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a zero-forcing Gram matrix is too ill-conditioned to invert.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string &what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

// Dimensions and operating point of one sub-connected hybrid array.
//
// Every RF chain feeds an exclusive subarray of `N = M / N_RF` antennas. The
// SNR is the linear ratio of per-user transmit power to noise variance; all
// SINR computations normalize the noise variance to one and the transmit
// power to `gamma`.
class SystemConfig {
public:
    SystemConfig(std::size_t antennas, std::size_t users, std::size_t rf_chains, double gamma,
                 std::uint64_t seed = 0)
        : M_(antennas), K_(users), N_RF_(rf_chains), gamma_(gamma), seed_(seed) {
        if (M_ == 0 || K_ == 0 || N_RF_ == 0)
            throw ConfigError("antenna, user and RF-chain counts must be positive");
        if (M_ % N_RF_ != 0)
            throw ConfigError("antenna count " + std::to_string(M_) +
                              " is not a multiple of the RF-chain count " + std::to_string(N_RF_));
        if (!(gamma_ > 0.0) || !std::isfinite(gamma_))
            throw ConfigError("SNR must be a positive finite linear value");
        N_ = M_ / N_RF_;
    }

    /// The standing regime: one RF chain per user.
    SystemConfig(std::size_t antennas, std::size_t users, double gamma, std::uint64_t seed = 0)
        : SystemConfig(antennas, users, users, gamma, seed) {}

    std::size_t antennas() const noexcept { return M_; }
    std::size_t users() const noexcept { return K_; }
    std::size_t rf_chains() const noexcept { return N_RF_; }
    std::size_t subarray_size() const noexcept { return N_; }
    double gamma() const noexcept { return gamma_; }
    std::uint64_t seed() const noexcept { return seed_; }

    bool one_chain_per_user() const noexcept { return N_RF_ == K_; }

    void require_one_chain_per_user(std::string_view operation) const {
        if (!one_chain_per_user())
            throw ConfigError(std::string(operation) + " requires one RF chain per user (N_RF = K), got N_RF = " +
                              std::to_string(N_RF_) + ", K = " + std::to_string(K_));
    }

    SystemConfig with_gamma(double gamma) const { return {M_, K_, N_RF_, gamma, seed_}; }
    SystemConfig with_seed(std::uint64_t seed) const { return {M_, K_, N_RF_, gamma_, seed}; }

private:
    std::size_t M_;
    std::size_t K_;
    std::size_t N_RF_;
    std::size_t N_ = 0;
    double gamma_;
    std::uint64_t seed_;
};

enum class ChannelModel { rayleigh, mmwave };

inline std::string_view to_string(ChannelModel model) {
    return model == ChannelModel::rayleigh ? "rayleigh" : "mmwave";
}

// Geometric channel parameters: `paths` propagation paths per user with
// CN(0,1) gains and angles of departure uniform on [0, 2*pi).
struct MmWaveParams {
    std::size_t paths = 4;
    double spacing_ratio = 0.5; // element spacing over wavelength

    void validate() const {
        if (paths == 0)
            throw ConfigError("mmWave path count must be at least 1");
        if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio))
            throw ConfigError("antenna spacing ratio must be positive");
    }
};

struct ChannelSpec {
    ChannelModel model = ChannelModel::rayleigh;
    MmWaveParams mmwave{};
};

} // namespace hmimo

#endif
