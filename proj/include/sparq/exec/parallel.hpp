// Copyright 2026 The SparQ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <iterator>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sparq/exec/config.hpp"

namespace sparq {

/// Dispatch counters, observable by tests that need to know whether a loop
/// actually forked.
struct ExecStats {
    std::atomic<std::size_t> sequential_loops { 0 };
    std::atomic<std::size_t> parallel_loops { 0 };
    std::atomic<std::size_t> sequential_sorts { 0 };
    std::atomic<std::size_t> parallel_sorts { 0 };

    void reset()
    {
        sequential_loops = 0;
        parallel_loops = 0;
        sequential_sorts = 0;
        parallel_sorts = 0;
    }
};

inline ExecStats& exec_stats()
{
    static ExecStats stats;
    return stats;
}

inline bool should_fork(std::size_t size, const ExecConfig& config)
{
#ifdef _OPENMP
    return config.thread_count > 1 && size >= config.threshold;
#else
    (void)size;
    (void)config;
    return false;
#endif
}

/// Applies `fn` to every element exactly once. `fn` must only touch the
/// element it is handed; the result is then independent of the thread count
/// and of the chunk boundaries.
template <class T, class Fn>
void parallel_for_branches(std::span<T> items, Fn&& fn, const ExecConfig& config)
{
    const std::size_t size = items.size();
    if (!should_fork(size, config)) {
        exec_stats().sequential_loops.fetch_add(1, std::memory_order_relaxed);
        for (auto& item : items) {
            fn(item);
        }
        return;
    }
    exec_stats().parallel_loops.fetch_add(1, std::memory_order_relaxed);
    const std::size_t chunk = config.chunk_size;
    const std::ptrdiff_t chunks = static_cast<std::ptrdiff_t>((size + chunk - 1) / chunk);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(static_cast<int>(config.thread_count))
#endif
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * chunk;
        const std::size_t end = std::min(begin + chunk, size);
        for (std::size_t i = begin; i < end; ++i) {
            fn(items[i]);
        }
    }
}

/// Stable merge sort. Runs are sorted independently by the workers and then
/// merged pairwise in log2(p) rounds; because every step is stable the
/// output is identical to std::stable_sort for any thread count.
template <class T, class Compare>
void parallel_merge_sort(std::vector<T>& items, Compare comp, const ExecConfig& config, std::vector<T>& scratch)
{
    const std::size_t size = items.size();
    if (!should_fork(size, config)) {
        exec_stats().sequential_sorts.fetch_add(1, std::memory_order_relaxed);
        std::stable_sort(items.begin(), items.end(), comp);
        return;
    }
    exec_stats().parallel_sorts.fetch_add(1, std::memory_order_relaxed);

    const std::size_t runs = std::min(config.thread_count, size);
    std::vector<std::size_t> bounds(runs + 1);
    for (std::size_t r = 0; r <= runs; ++r) {
        bounds[r] = size * r / runs;
    }

#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1) num_threads(static_cast<int>(config.thread_count))
#endif
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(runs); ++r) {
        std::stable_sort(items.begin() + static_cast<std::ptrdiff_t>(bounds[r]),
            items.begin() + static_cast<std::ptrdiff_t>(bounds[r + 1]), comp);
    }

    scratch.resize(size);
    for (std::size_t width = 1; width < runs; width *= 2) {
        const std::ptrdiff_t pairs = static_cast<std::ptrdiff_t>((runs + 2 * width - 1) / (2 * width));
#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1) num_threads(static_cast<int>(config.thread_count))
#endif
        for (std::ptrdiff_t pr = 0; pr < pairs; ++pr) {
            const std::size_t left = static_cast<std::size_t>(pr) * 2 * width;
            const std::size_t mid = std::min(left + width, runs);
            const std::size_t right = std::min(left + 2 * width, runs);
            auto first = items.begin();
            std::merge(std::make_move_iterator(first + static_cast<std::ptrdiff_t>(bounds[left])),
                std::make_move_iterator(first + static_cast<std::ptrdiff_t>(bounds[mid])),
                std::make_move_iterator(first + static_cast<std::ptrdiff_t>(bounds[mid])),
                std::make_move_iterator(first + static_cast<std::ptrdiff_t>(bounds[right])),
                scratch.begin() + static_cast<std::ptrdiff_t>(bounds[left]), comp);
        }
        items.swap(scratch);
    }
}

template <class T, class Compare>
void parallel_merge_sort(std::vector<T>& items, Compare comp, const ExecConfig& config)
{
    std::vector<T> scratch;
    parallel_merge_sort(items, comp, config, scratch);
}

} // namespace sparq
