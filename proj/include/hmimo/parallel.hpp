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

#ifndef HMIMO_PARALLEL_HPP
#define HMIMO_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hmimo {

/// Environment variable that overrides the worker count. Results never depend on it.
inline constexpr const char *kWorkersEnv = "HMIMO_WORKERS";

inline std::size_t default_worker_count() {
    if (const char *env = std::getenv(kWorkersEnv)) {
        try {
            const long v = std::stol(env);
            if (v > 0)
                return static_cast<std::size_t>(v);
        } catch (const std::exception &) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count) on up to `workers` threads. Indices are
// claimed dynamically; callers must make body(i) depend on i alone. The first
// exception thrown by any body is rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t count, Body &&body, std::size_t workers = 0) {
    if (workers == 0)
        workers = default_worker_count();
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

// Welford accumulator with Chan's pairwise merge. Merging blocks in a fixed
// order makes the result independent of how blocks were scheduled.
struct RunningStats {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats &other) {
        if (other.count == 0)
            return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double n1 = static_cast<double>(count);
        const double n2 = static_cast<double>(other.count);
        const double delta = other.mean - mean;
        const double n = n1 + n2;
        mean += delta * n2 / n;
        m2 += other.m2 + delta * delta * n1 * n2 / n;
        count += other.count;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double standard_error() const {
        return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

/// Trials per reduction block; fixed so the merge tree never depends on the worker count.
inline constexpr std::size_t kBlockSize = 256;

} // namespace hmimo

#endif
