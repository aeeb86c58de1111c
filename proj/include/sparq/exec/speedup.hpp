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

#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sparq/error.hpp"
#include "sparq/exec/config.hpp"

namespace sparq {

struct SpeedupPoint {
    std::size_t threads = 1;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    double speedup = 1.0;
};

/// Speedup(p) = T(1) / T(p), with T the mean wall time over trials.
struct SpeedupReport {
    std::string op;
    std::size_t branch_count = 0;
    std::size_t trials = 0;
    std::vector<SpeedupPoint> points;

    double speedup(std::size_t threads) const
    {
        for (const auto& p : points) {
            if (p.threads == threads) {
                return p.speedup;
            }
        }
        throw Error(Errc::InvalidArgument, "no measurement for p=" + std::to_string(threads));
    }
};

struct TimingStats {
    double mean = 0.0;
    double stddev = 0.0;
};

inline TimingStats summarize(const std::vector<double>& samples)
{
    TimingStats s;
    if (samples.empty()) {
        return s;
    }
    for (double x : samples) {
        s.mean += x;
    }
    s.mean /= static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double var = 0.0;
        for (double x : samples) {
            var += (x - s.mean) * (x - s.mean);
        }
        s.stddev = std::sqrt(var / static_cast<double>(samples.size() - 1));
    }
    return s;
}

/// Times `op(state)` on a fresh `make_state(config)` for each thread count.
/// Only the operation is timed. The first entry of `threads` should be 1.
/// Throws TimingTooNoisy when a point has stddev/mean above 0.5 or when the
/// single-thread time is below `min_baseline_ms`.
template <class MakeState, class Op>
SpeedupReport measure_speedup(const std::string& name, std::size_t branch_count, const std::vector<std::size_t>& threads,
    std::size_t trials, MakeState&& make_state, Op&& op, double min_baseline_ms = 50.0)
{
    if (trials == 0 || threads.empty()) {
        throw Error(Errc::InvalidArgument, "need at least one trial and one thread count");
    }
    SpeedupReport report { name, branch_count, trials, {} };
    double baseline = 0.0;
    for (std::size_t p : threads) {
        ExecConfig config = ExecConfig::from_env();
        config.thread_count = p;
        std::vector<double> samples;
        for (std::size_t t = 0; t < trials; ++t) {
            auto state = make_state(config);
            const auto start = std::chrono::steady_clock::now();
            op(state);
            const auto stop = std::chrono::steady_clock::now();
            samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        }
        const TimingStats stats = summarize(samples);
        if (stats.mean > 0.0 && stats.stddev / stats.mean > 0.5) {
            throw Error(Errc::TimingTooNoisy,
                name + ": stddev/mean = " + std::to_string(stats.stddev / stats.mean) + " at p=" + std::to_string(p));
        }
        if (report.points.empty()) {
            baseline = stats.mean;
            if (baseline < min_baseline_ms) {
                throw Error(Errc::TimingTooNoisy,
                    name + ": baseline " + std::to_string(baseline) + " ms is below " + std::to_string(min_baseline_ms) + " ms");
            }
        }
        report.points.push_back({ p, stats.mean, stats.stddev, baseline / stats.mean });
    }
    return report;
}

} // namespace sparq
