// Copyright 2026 The qidt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "qidt/rng.hpp"

namespace qidt {

namespace detail {
inline std::atomic<unsigned>& thread_cap() {
    static std::atomic<unsigned> cap{std::max(1u, std::thread::hardware_concurrency())};
    return cap;
}
}  // namespace detail

inline unsigned max_threads() { return detail::thread_cap().load(); }
/// 0 restores the hardware concurrency.
inline void set_max_threads(unsigned n) {
    detail::thread_cap().store(n > 0 ? n : std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs body(i) for i in [0, n) on up to max_threads() workers. Work items
/// are independent; the first exception thrown is rethrown on the caller.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(max_threads(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Streaming mean/variance (Welford) with Chan's pairwise merge.
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

    void merge(const RunningStats& other) {
        if (other.count == 0) return;
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

    // Unbiased sample variance.
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double stderr_of_mean() const {
        return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

inline constexpr std::size_t kMonteCarloChunk = 4096;

/// Deterministic chunked reduction: sample i belongs to chunk i / chunk_size,
/// chunk c draws from base.split(c), and chunk accumulators are merged in
/// chunk order. The result is bitwise independent of the worker count.
template <class Acc, class Init, class Sample, class Merge>
Acc chunked_reduce(std::size_t samples, const Rng& base, Init&& init, Sample&& sample,
                   Merge&& merge, std::size_t chunk_size = kMonteCarloChunk) {
    const std::size_t chunks = (samples + chunk_size - 1) / chunk_size;
    std::vector<Acc> partial;
    partial.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) partial.push_back(init());
    parallel_for(chunks, [&](std::size_t c) {
        Rng stream = base.split(c);
        const std::size_t begin = c * chunk_size;
        const std::size_t end = std::min(samples, begin + chunk_size);
        for (std::size_t i = begin; i < end; ++i) sample(stream, partial[c]);
    });
    Acc total = init();
    for (const auto& p : partial) merge(total, p);
    return total;
}

/// Mean and standard error of a scalar estimator f(rng) over n draws.
template <class F>
RunningStats monte_carlo(std::size_t samples, Rng& rng, F&& f) {
    const Rng base(rng.next_u64());
    return chunked_reduce<RunningStats>(
        samples, base, [] { return RunningStats{}; },
        [&](Rng& stream, RunningStats& acc) { acc.push(f(stream)); },
        [](RunningStats& total, const RunningStats& part) { total.merge(part); });
}

}  // namespace qidt
