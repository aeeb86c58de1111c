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

#include <cmath>
#include <cstdint>
#include <map>
#include <random>

#include "sparq/core/sparse_state.hpp"
#include "sparq/exec/profiler.hpp"
#include "sparq/gates/ops.hpp"

namespace sparq {

inline constexpr double kNormTolerance = 1e-10;

/// Uniform double in [0, 1) from the top 53 bits, so results do not depend
/// on the standard library's distribution implementation.
inline double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace detail {

    template <std::size_t R>
    void require_normalized(const BasicSparseState<R>& state)
    {
        const double n2 = state.norm_squared();
        if (std::abs(n2 - 1.0) > kNormTolerance) {
            throw Error(Errc::UnnormalizedState, "state norm^2 is " + std::to_string(n2));
        }
    }

    /// Samples a value of (registers[slot] & mask) and collapses onto it.
    template <std::size_t R>
    std::uint64_t measure_masked(BasicSparseState<R>& state, int slot, std::uint64_t mask, std::mt19937_64& rng)
    {
        ProfileScope profile("Measure", OpFamily::Other);
        require_normalized(state);
        std::map<std::uint64_t, double> weights;
        for (const auto& b : state.branches()) {
            weights[b.registers[slot] & mask] += std::norm(b.amplitude);
        }
        const double u = uniform01(rng) * state.norm_squared();
        double acc = 0.0;
        std::uint64_t outcome = weights.rbegin()->first;
        for (const auto& [value, w] : weights) {
            acc += w;
            if (u < acc) {
                outcome = value;
                break;
            }
        }
        const double scale = 1.0 / std::sqrt(weights[outcome]);
        std::erase_if(state.branches(), [&](const auto& b) { return (b.registers[slot] & mask) != outcome; });
        for (auto& b : state.branches()) {
            b.amplitude *= scale;
        }
        return outcome;
    }

} // namespace detail

/// Projective measurement of a whole register; the state collapses in place.
template <std::size_t R>
std::uint64_t measure_register(BasicSparseState<R>& state, int reg_id, std::mt19937_64& rng)
{
    const auto& d = state.table().require_active(reg_id);
    return detail::measure_masked(state, reg_id, width_mask(d.width), rng);
}

template <std::size_t R>
std::uint64_t measure_register(BasicSparseState<R>& state, int reg_id, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return measure_register(state, reg_id, rng);
}

/// Projective measurement of one qubit; returns 0 or 1.
template <std::size_t R>
int measure_bit(BasicSparseState<R>& state, int reg_id, unsigned bit, std::mt19937_64& rng)
{
    const std::uint64_t mask = detail::target_mask(state, reg_id, bit);
    return detail::measure_masked(state, reg_id, mask, rng) != 0 ? 1 : 0;
}

/// Probability of each value of a register, without collapsing.
template <std::size_t R>
std::map<std::uint64_t, double> register_distribution(const BasicSparseState<R>& state, int reg_id)
{
    state.table().require_active(reg_id);
    std::map<std::uint64_t, double> out;
    for (const auto& b : state.branches()) {
        out[b.registers[reg_id]] += std::norm(b.amplitude);
    }
    return out;
}

} // namespace sparq
