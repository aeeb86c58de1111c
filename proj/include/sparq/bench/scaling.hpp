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
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define SPARQ_HAVE_CLFLUSH 1
#endif

#include "sparq/core/sparse_state.hpp"
#include "sparq/exec/profiler.hpp"
#include "sparq/exec/speedup.hpp"
#include "sparq/gates/gates.hpp"

namespace sparq::bench {

/// Two slots are enough for the synthetic states: one 48-bit register.
using ScalingState = BasicSparseState<2>;
using ScalingBranch = ScalingState::Branch;

struct ScalingRow {
    std::string op;
    OpFamily family = OpFamily::NonInterference;
    std::size_t branches = 0;
    std::size_t trials = 0;
    std::size_t repeats = 1;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    std::size_t peak_branches = 0;
    std::size_t memory_proxy_bytes = 0;
    std::size_t memory_with_baseline_bytes = 0;
};

struct ScalingFit {
    std::string op;
    OpFamily family = OpFamily::NonInterference;
    double slope = 0.0;
    double intercept = 0.0;
};

/// Cold flushes the timed copy out of every cache level first, so all grid
/// points run from DRAM. Warm times it straight after the copy, which keeps
/// small states in cache and mixes cache-level changes into the slope.
enum class CacheMode { Cold, Warm };

inline const char* to_string(CacheMode m) { return m == CacheMode::Cold ? "cold" : "warm"; }

/// Writes back and evicts every cache line of the branch array.
template <std::size_t R>
void flush_state(const BasicSparseState<R>& s)
{
#ifdef SPARQ_HAVE_CLFLUSH
    const auto* p = reinterpret_cast<const char*>(s.branches().data());
    const std::size_t bytes = s.size() * sizeof(typename BasicSparseState<R>::Branch);
    for (std::size_t off = 0; off < bytes; off += 64) {
        _mm_clflush(p + off);
    }
    _mm_mfence();
#else
    // No portable flush: stream through a buffer larger than typical caches.
    static std::vector<char> junk(std::size_t { 512 } << 20);
    for (std::size_t i = 0; i < junk.size(); i += 64) {
        junk[i] = static_cast<char>(junk[i] + 1);
    }
    (void)s;
#endif
}

struct ScalingResult {
    CacheMode cache = CacheMode::Cold;
    std::vector<ScalingRow> rows;
    std::vector<ScalingFit> fits;
    std::size_t baseline_bytes = 0;
};

/// Benchmarked operations, all on bit 0 of the synthetic register.
inline const std::vector<std::string>& scaling_ops()
{
    static const std::vector<std::string> ops { "x", "z", "rz", "cx", "h", "rot" };
    return ops;
}

inline OpFamily scaling_family(const std::string& op)
{
    if (op == "x" || op == "z" || op == "rz" || op == "cx") {
        return OpFamily::NonInterference;
    }
    if (op == "h" || op == "rot") {
        return OpFamily::Interference;
    }
    throw Error(Errc::InvalidArgument, "unknown scaling op '" + op + "'");
}

template <std::size_t R>
void apply_scaling_op(BasicSparseState<R>& s, const std::string& op)
{
    if (op == "x") {
        apply_flip(s, 0, 0);
    } else if (op == "z") {
        apply_z(s, 0, 0);
    } else if (op == "rz") {
        apply_unitary2(s, 0, 0, gate::rz(0.4));
    } else if (op == "cx") {
        apply_flip(s, 0, 0, { { 0, 1, true } });
    } else if (op == "h") {
        apply_h(s, 0, 0);
    } else if (op == "rot") {
        apply_unitary2(s, 0, 0, gate::ry(0.7));
    } else {
        throw Error(Errc::InvalidArgument, "unknown scaling op '" + op + "'");
    }
}

/// Uniform superposition over `count` distinct random 48-bit values with
/// bit 0 clear, in canonical order. Built directly, not through gates.
inline ScalingState uniform_state(std::size_t count, std::uint64_t seed, ExecConfig config = ExecConfig::from_env())
{
    ScalingState s(config);
    s.add_register("q", 48);
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> values;
    values.reserve(count);
    while (values.size() < count) {
        while (values.size() < count) {
            values.push_back((rng() & width_mask(47)) << 1);
        }
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
    }
    std::vector<ScalingBranch> branches(count);
    const Amplitude amp(1.0 / std::sqrt(static_cast<double>(count)), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        branches[i].amplitude = amp;
        branches[i].registers[0] = values[i];
    }
    s.assign(std::move(branches));
    return s;
}

/// Log-spaced integers from lo to hi inclusive with `per_decade` points
/// per factor of ten.
inline std::vector<std::size_t> log_grid(double lo, double hi, unsigned per_decade = 2)
{
    if (!(lo >= 1.0) || !(hi >= lo) || per_decade == 0) {
        throw Error(Errc::InvalidArgument, "grid needs 1 <= lo <= hi");
    }
    std::vector<std::size_t> grid;
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    const auto steps = static_cast<std::size_t>(std::llround((b - a) * per_decade));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double e = steps == 0 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(steps);
        const auto v = static_cast<std::size_t>(std::llround(std::pow(10.0, e)));
        if (grid.empty() || grid.back() != v) {
            grid.push_back(v);
        }
    }
    return grid;
}

/// "lo:hi" such as "10:1e7".
inline std::vector<std::size_t> parse_grid(const std::string& text, unsigned per_decade = 2)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw Error(Errc::InvalidArgument, "grid must look like lo:hi, got '" + text + "'");
    }
    try {
        return log_grid(std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1)), per_decade);
    } catch (const std::logic_error&) {
        throw Error(Errc::InvalidArgument, "grid must look like lo:hi, got '" + text + "'");
    }
}

/// Resident set size of this process, or 0 where /proc is unavailable.
inline std::size_t resident_bytes()
{
    std::ifstream in("/proc/self/statm");
    std::size_t pages = 0;
    std::size_t resident = 0;
    if (!(in >> pages >> resident)) {
        return 0;
    }
    return resident * static_cast<std::size_t>(sysconf(_SC_PAGESIZE));
}

/// Least-squares slope of log(y) against log(x).
inline std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = std::log(x[i]);
        const double w = std::log(y[i]);
        sx += u;
        sy += w;
        sxx += u * u;
        sxy += u * w;
    }
    const double den = n * sxx - sx * sx;
    if (x.size() < 2 || den == 0.0) {
        return { 0.0, x.empty() ? 0.0 : sy / n };
    }
    const double slope = (n * sxy - sx * sy) / den;
    return { slope, (sy - slope * sx) / n };
}

/// Times each op on fresh uniform states over the grid. Each trial applies
/// the op to `repeats` fresh copies (only the op is timed) so that small
/// states still give a measurable interval; the row reports time per op.
/// Cold mode flushes each copy before timing.
inline ScalingResult scaling_experiment(const std::vector<std::string>& ops, const std::vector<std::size_t>& grid,
    std::size_t trials, ExecConfig config = ExecConfig::from_env(), std::uint64_t seed = 1,
    std::size_t min_work = 200000, CacheMode cache = CacheMode::Cold)
{
    if (trials < 1) {
        throw Error(Errc::InvalidArgument, "trials must be at least 1");
    }
    for (const auto& op : ops) {
        scaling_family(op);
    }
    ScalingResult result;
    result.cache = cache;
    result.baseline_bytes = resident_bytes();
    for (std::size_t count : grid) {
        const ScalingState proto = uniform_state(count, seed + count, config);
        const std::size_t repeats = std::max<std::size_t>(1, min_work / std::max<std::size_t>(1, count));
        for (const auto& op : ops) {
            ScalingRow row;
            row.op = op;
            row.family = scaling_family(op);
            row.branches = count;
            row.trials = trials;
            row.repeats = repeats;
            std::vector<double> samples;
            for (std::size_t t = 0; t < trials; ++t) {
                double total = 0.0;
                for (std::size_t r = 0; r < repeats; ++r) {
                    ScalingState s = proto;
                    if (cache == CacheMode::Cold) {
                        flush_state(s);
                    }
                    const auto start = std::chrono::steady_clock::now();
                    apply_scaling_op(s, op);
                    const auto stop = std::chrono::steady_clock::now();
                    total += std::chrono::duration<double, std::milli>(stop - start).count();
                    row.peak_branches = std::max(row.peak_branches, std::max(count, s.size()));
                }
                samples.push_back(total / static_cast<double>(repeats));
            }
            const TimingStats st = summarize(samples);
            row.mean_ms = st.mean;
            row.stddev_ms = st.stddev;
            row.memory_proxy_bytes = row.peak_branches * sizeof(ScalingBranch);
            row.memory_with_baseline_bytes = result.baseline_bytes + row.memory_proxy_bytes;
            result.rows.push_back(row);
        }
    }
    for (const auto& op : ops) {
        std::vector<double> x, y;
        for (const auto& r : result.rows) {
            if (r.op == op) {
                x.push_back(static_cast<double>(r.branches));
                y.push_back(r.mean_ms);
            }
        }
        const auto [slope, intercept] = loglog_fit(x, y);
        result.fits.push_back({ op, scaling_family(op), slope, intercept });
    }
    return result;
}

inline void write_scaling_csv(std::ostream& out, const ScalingResult& r)
{
    out << "op,family,branches,trials,repeats,mean_ms,stddev_ms,peak_branches,memory_proxy_bytes,memory_with_baseline_bytes,cache\n";
    out.precision(8);
    for (const auto& row : r.rows) {
        out << row.op << ',' << to_string(row.family) << ',' << row.branches << ',' << row.trials << ',' << row.repeats
            << ',' << row.mean_ms << ',' << row.stddev_ms << ',' << row.peak_branches << ',' << row.memory_proxy_bytes
            << ',' << row.memory_with_baseline_bytes << ',' << to_string(r.cache) << '\n';
    }
}

} // namespace sparq::bench
