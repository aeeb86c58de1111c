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

#include <cstdint>
#include <string>

#include "sparq/core/sparse_state.hpp"
#include "sparq/exec/profiler.hpp"
#include "sparq/gates/controls.hpp"
#include "sparq/gates/ops.hpp"

namespace sparq {

/// Multiplicative inverse of an odd `c` modulo 2^width (Newton iteration;
/// each step doubles the number of correct low bits).
constexpr std::uint64_t inverse_mod_pow2(std::uint64_t c, unsigned width)
{
    std::uint64_t x = c;
    for (int i = 0; i < 6; ++i) {
        x *= 2 - c * x;
    }
    return x & width_mask(width);
}

namespace detail {

    template <std::size_t R>
    void check_distinct(const BasicSparseState<R>& state, int src_id, int dst_id)
    {
        state.table().require_active(src_id);
        state.table().require_active(dst_id);
        if (src_id == dst_id) {
            throw Error(Errc::AliasedRegisters, "source and destination are the same register");
        }
    }

    template <std::size_t R>
    CompiledControls arith_controls(const BasicSparseState<R>& state, const ControlSpec& controls, int dst_id)
    {
        CompiledControls cc(state, controls, dst_id, width_mask(state.table().width_of(dst_id)));
        return cc;
    }

} // namespace detail

/// dst += c mod 2^width(dst).
template <std::size_t R>
void arith_add_const(BasicSparseState<R>& state, int dst_id, std::uint64_t c, const ControlSpec& controls = {})
{
    ProfileScope profile("AddConst", OpFamily::NonInterference);
    const std::uint64_t mask = width_mask(state.table().width_of(dst_id));
    const CompiledControls cc = detail::arith_controls(state, controls, dst_id);
    detail::for_each_controlled(state, cc, [dst_id, c, mask](BasicBranch<R>& b) {
        b.set(dst_id, (b.registers[dst_id] + c) & mask);
    });
}

/// dst -= c mod 2^width(dst).
template <std::size_t R>
void arith_sub_const(BasicSparseState<R>& state, int dst_id, std::uint64_t c, const ControlSpec& controls = {})
{
    arith_add_const(state, dst_id, ~c + 1, controls);
}

/// dst += src mod 2^width(dst).
template <std::size_t R>
void arith_add_reg(BasicSparseState<R>& state, int src_id, int dst_id, const ControlSpec& controls = {})
{
    ProfileScope profile("AddReg", OpFamily::NonInterference);
    detail::check_distinct(state, src_id, dst_id);
    const std::uint64_t mask = width_mask(state.table().width_of(dst_id));
    const CompiledControls cc = detail::arith_controls(state, controls, dst_id);
    detail::for_each_controlled(state, cc, [src_id, dst_id, mask](BasicBranch<R>& b) {
        b.set(dst_id, (b.registers[dst_id] + b.registers[src_id]) & mask);
    });
}

/// dst -= src mod 2^width(dst).
template <std::size_t R>
void arith_sub_reg(BasicSparseState<R>& state, int src_id, int dst_id, const ControlSpec& controls = {})
{
    ProfileScope profile("SubReg", OpFamily::NonInterference);
    detail::check_distinct(state, src_id, dst_id);
    const std::uint64_t mask = width_mask(state.table().width_of(dst_id));
    const CompiledControls cc = detail::arith_controls(state, controls, dst_id);
    detail::for_each_controlled(state, cc, [src_id, dst_id, mask](BasicBranch<R>& b) {
        b.set(dst_id, (b.registers[dst_id] - b.registers[src_id]) & mask);
    });
}

/// dst ^= src, truncated to the width of dst.
template <std::size_t R>
void arith_xor_reg(BasicSparseState<R>& state, int src_id, int dst_id, const ControlSpec& controls = {})
{
    ProfileScope profile("XorReg", OpFamily::NonInterference);
    detail::check_distinct(state, src_id, dst_id);
    const std::uint64_t mask = width_mask(state.table().width_of(dst_id));
    const CompiledControls cc = detail::arith_controls(state, controls, dst_id);
    detail::for_each_controlled(state, cc, [src_id, dst_id, mask](BasicBranch<R>& b) {
        b.xor_slot(dst_id, b.registers[src_id] & mask);
    });
}

/// reg *= c mod 2^width(reg); `c` must be odd so the map is a permutation.
template <std::size_t R>
void arith_mul_const_odd(BasicSparseState<R>& state, int reg_id, std::uint64_t c, const ControlSpec& controls = {})
{
    ProfileScope profile("MulConst", OpFamily::NonInterference);
    if ((c & 1u) == 0) {
        throw Error(Errc::EvenMultiplier, "multiplier " + std::to_string(c) + " is even");
    }
    const std::uint64_t mask = width_mask(state.table().width_of(reg_id));
    const CompiledControls cc = detail::arith_controls(state, controls, reg_id);
    detail::for_each_controlled(state, cc, [reg_id, c, mask](BasicBranch<R>& b) {
        b.set(reg_id, (b.registers[reg_id] * c) & mask);
    });
}

/// Undoes arith_mul_const_odd(state, reg_id, c).
template <std::size_t R>
void arith_div_const_odd(BasicSparseState<R>& state, int reg_id, std::uint64_t c, const ControlSpec& controls = {})
{
    if ((c & 1u) == 0) {
        throw Error(Errc::EvenMultiplier, "multiplier " + std::to_string(c) + " is even");
    }
    arith_mul_const_odd(state, reg_id, inverse_mod_pow2(c, state.table().width_of(reg_id)), controls);
}

} // namespace sparq
