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

#ifndef HMIMO_RANDOM_HPP
#define HMIMO_RANDOM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/random/normal_distribution.hpp>

namespace hmimo {

// Counter-derived random stream.
//
// A stream is keyed by (seed, draw, attempt) and is a pure function of that
// key, so every Monte Carlo draw sees the same numbers no matter which worker
// evaluates it or in which order. The key is hashed into a SplitMix64 state;
// consecutive outputs walk a Weyl sequence through the same finalizer.
// Gaussian variates come from Boost's ziggurat sampler, whose output is fixed
// by the engine bits and does not vary between standard libraries.
class Substream {
public:
    using result_type = std::uint64_t;

    Substream(std::uint64_t seed, std::uint64_t draw, std::uint64_t attempt = 0) noexcept {
        state_ = mix(seed + kGolden);
        state_ = mix(state_ ^ (draw + 0x6a09e667f3bcc909ULL));
        state_ = mix(state_ ^ (attempt + 0xbb67ae8584caa73bULL));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += kGolden;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Real standard normal (ziggurat, driven by this stream).
    double normal() { return normal_(*this); }

    /// Circularly-symmetric CN(0, 1): real and imaginary parts each N(0, 1/2).
    std::complex<double> complex_normal() {
        const double re = normal() * (std::numbers::sqrt2 / 2.0);
        const double im = normal() * (std::numbers::sqrt2 / 2.0);
        return {re, im};
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    boost::random::normal_distribution<double> normal_{};
};

} // namespace hmimo

#endif
