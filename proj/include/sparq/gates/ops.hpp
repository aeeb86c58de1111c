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
#include <span>
#include <string>

#include "sparq/core/sparse_state.hpp"
#include "sparq/exec/parallel.hpp"
#include "sparq/exec/profiler.hpp"
#include "sparq/gates/controls.hpp"
#include "sparq/gates/unitary.hpp"

namespace sparq {

namespace detail {

    template <std::size_t R>
    std::uint64_t target_mask(const BasicSparseState<R>& state, int reg_id, unsigned bit)
    {
        const auto& d = state.table().require_active(reg_id);
        if (bit >= d.width) {
            throw Error(Errc::InvalidTarget,
                "bit " + std::to_string(bit) + " outside register '" + d.name + "' of width " + std::to_string(d.width));
        }
        return std::uint64_t { 1 } << bit;
    }

    /// Runs `fn` on every branch that satisfies `controls`.
    template <std::size_t R, class Fn>
    void for_each_controlled(BasicSparseState<R>& state, const CompiledControls& controls, Fn&& fn)
    {
        std::span<BasicBranch<R>> items(state.branches());
        if (controls.empty()) {
            parallel_for_branches(items, fn, state.exec());
        } else {
            parallel_for_branches(items, [&](BasicBranch<R>& b) {
                if (controls.test(b.registers)) {
                    fn(b);
                }
            }, state.exec());
        }
    }

    template <std::size_t R, class MatrixFn>
    void apply_general_canonical(BasicSparseState<R>& state, int reg_id, unsigned bit,
        const CompiledControls& controls, MatrixFn&& matrix_for)
    {
        using Branch = BasicBranch<R>;
        const IdleOrder order { reg_id, std::uint64_t { 1 } << bit };
        const std::uint64_t mask = order.bit_mask;
        auto& v = state.branches();
        auto& out = state.scratch();
        out.clear();
        out.reserve(v.size() + v.size() / 2 + 1);
        // Results with the target bit set wait here until their run ends.
        std::vector<Branch> ones;
        auto keep = [](std::vector<Branch>& dst, const Branch& b) {
            if (std::abs(b.amplitude) > kPruneTolerance) {
                dst.push_back(b);
            }
        };
        const std::size_t n = v.size();
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i + 1;
            while (j < n && order.same_prefix(v[i], v[j])) {
                ++j;
            }
            std::size_t m = i;
            while (m < j && (v[m].registers[reg_id] & mask) == 0) {
                ++m;
            }
            ones.clear();
            std::size_t p = i;
            std::size_t q = m;
            while (p < m || q < j) {
                Branch* zero = nullptr;
                Branch* one = nullptr;
                if (p < m && q < j && order.coherent(v[p], v[q])) {
                    zero = &v[p++];
                    one = &v[q++];
                } else if (q == j || (p < m && order(v[p], v[q]))) {
                    zero = &v[p++];
                } else {
                    one = &v[q++];
                }
                const Branch& any = zero ? *zero : *one;
                if (!controls.empty() && !controls.test(any.registers)) {
                    if (zero) {
                        out.push_back(*zero);
                    }
                    if (one) {
                        ones.push_back(*one);
                    }
                    continue;
                }
                const Unitary2 u = matrix_for(any);
                const Amplitude a0 = zero ? zero->amplitude : Amplitude {};
                const Amplitude a1 = one ? one->amplitude : Amplitude {};
                Branch b0 = zero ? *zero : *one;
                Branch b1 = one ? *one : *zero;
                if (!zero) {
                    b0.xor_slot(reg_id, mask);
                }
                if (!one) {
                    b1.xor_slot(reg_id, mask);
                }
                b0.amplitude = u.u00 * a0 + u.u01 * a1;
                b1.amplitude = u.u10 * a0 + u.u11 * a1;
                keep(out, b0);
                keep(ones, b1);
            }
            out.insert(out.end(), ones.begin(), ones.end());
            i = j;
        }
        v.swap(out);
        state.update_max_size();
    }

    /// Interference path. The state is ordered so coherent partners are
    /// adjacent, each group of one or two branches is multiplied by the 2x2
    /// matrix returned by `matrix_for`, a missing partner is created when
    /// it would receive amplitude, and branches at or below the prune
    /// tolerance are dropped. The result is left in canonical order.
    ///
    /// When the input is already canonical the idle order is never
    /// materialized: each prefix run is split at the target bit and its two
    /// halves are walked like a merge, so one copy replaces three.
    template <std::size_t R, class MatrixFn>
    void apply_general(BasicSparseState<R>& state, int reg_id, unsigned bit, const CompiledControls& controls,
        MatrixFn&& matrix_for)
    {
        using Branch = BasicBranch<R>;
        if (std::is_sorted(state.branches().begin(), state.branches().end(), CanonicalOrder {})) {
            apply_general_canonical(state, reg_id, bit, controls, matrix_for);
            return;
        }
        sort_by_idle(state, reg_id, bit);
        const IdleOrder order { reg_id, std::uint64_t { 1 } << bit };
        auto& v = state.branches();
        auto& out = state.scratch();
        out.clear();
        out.reserve(v.size() + v.size() / 2 + 1);

        auto emit = [&out](const Branch& b) {
            if (std::abs(b.amplitude) > kPruneTolerance) {
                out.push_back(b);
            }
        };

        const std::size_t n = v.size();
        std::size_t i = 0;
        while (i < n) {
            Branch& first = v[i];
            const bool paired = i + 1 < n && order.coherent(first, v[i + 1]);
            if (!controls.empty() && !controls.test(first.registers)) {
                out.push_back(first);
                if (paired) {
                    out.push_back(v[i + 1]);
                }
                i += paired ? 2 : 1;
                continue;
            }
            const Unitary2 u = matrix_for(first);
            if (paired) {
                Branch& second = v[i + 1];
                const Amplitude a0 = first.amplitude;
                const Amplitude a1 = second.amplitude;
                first.amplitude = u.u00 * a0 + u.u01 * a1;
                second.amplitude = u.u10 * a0 + u.u11 * a1;
                emit(first);
                emit(second);
                i += 2;
                continue;
            }
            const Amplitude a = first.amplitude;
            Branch partner = first;
            partner.xor_slot(reg_id, order.bit_mask);
            if ((first.registers[reg_id] & order.bit_mask) == 0) {
                first.amplitude = u.u00 * a;
                partner.amplitude = u.u10 * a;
                emit(first);
                emit(partner);
            } else {
                first.amplitude = u.u11 * a;
                partner.amplitude = u.u01 * a;
                emit(partner);
                emit(first);
            }
            ++i;
        }
        v.swap(out);
        state.update_max_size();
        detail::idle_to_canonical(state, order);
    }

} // namespace detail

/// X on one qubit of each branch that satisfies `controls`.
template <std::size_t R>
void apply_flip(BasicSparseState<R>& state, int reg_id, unsigned bit, const ControlSpec& controls = {})
{
    ProfileScope profile("FlipBool", OpFamily::NonInterference);
    const std::uint64_t mask = detail::target_mask(state, reg_id, bit);
    const CompiledControls cc(state, controls, reg_id, mask);
    detail::for_each_controlled(state, cc, [reg_id, mask](BasicBranch<R>& b) {
        b.xor_slot(reg_id, mask);
    });
}

/// Multiplies branches whose target bit is 1 by `phase_on_one`.
template <std::size_t R>
void apply_phase(BasicSparseState<R>& state, int reg_id, unsigned bit, Amplitude phase_on_one,
    const ControlSpec& controls = {})
{
    ProfileScope profile("Phase", OpFamily::NonInterference);
    if (std::abs(std::abs(phase_on_one) - 1.0) > kUnitaryTolerance) {
        throw Error(Errc::NonUnitPhase, "phase factor must have unit modulus");
    }
    const std::uint64_t mask = detail::target_mask(state, reg_id, bit);
    const CompiledControls cc(state, controls, reg_id, mask);
    detail::for_each_controlled(state, cc, [reg_id, mask, phase_on_one](BasicBranch<R>& b) {
        if ((b.registers[reg_id] & mask) != 0) {
            b.amplitude *= phase_on_one;
        }
    });
}

/// Y = [[0, -i], [i, 0]]: flip plus a phase of i (from 0) or -i (from 1).
template <std::size_t R>
void apply_y(BasicSparseState<R>& state, int reg_id, unsigned bit, const ControlSpec& controls = {})
{
    ProfileScope profile("Y", OpFamily::NonInterference);
    const std::uint64_t mask = detail::target_mask(state, reg_id, bit);
    const CompiledControls cc(state, controls, reg_id, mask);
    detail::for_each_controlled(state, cc, [reg_id, mask](BasicBranch<R>& b) {
        const bool one = (b.registers[reg_id] & mask) != 0;
        b.amplitude *= one ? Amplitude(0.0, -1.0) : Amplitude(0.0, 1.0);
        b.xor_slot(reg_id, mask);
    });
}

/// General single-qubit unitary, dispatched on its structure. Diagonal and
/// anti-diagonal matrices are applied branch by branch; anything else takes
/// the interference path. Setting `force_general` skips the dispatch.
template <std::size_t R>
void apply_unitary2(BasicSparseState<R>& state, int reg_id, unsigned bit, const Unitary2& u,
    const ControlSpec& controls = {}, bool force_general = false)
{
    u.validate();
    const std::uint64_t mask = detail::target_mask(state, reg_id, bit);
    const CompiledControls cc(state, controls, reg_id, mask);
    const GateKind kind = force_general ? GateKind::General : u.kind();
    switch (kind) {
    case GateKind::Diagonal: {
        ProfileScope profile("Rot_diag", OpFamily::NonInterference);
        detail::for_each_controlled(state, cc, [reg_id, mask, u](BasicBranch<R>& b) {
            b.amplitude *= (b.registers[reg_id] & mask) != 0 ? u.u11 : u.u00;
        });
        return;
    }
    case GateKind::AntiDiagonal: {
        ProfileScope profile("Rot_adiag", OpFamily::NonInterference);
        detail::for_each_controlled(state, cc, [reg_id, mask, u](BasicBranch<R>& b) {
            b.amplitude *= (b.registers[reg_id] & mask) != 0 ? u.u01 : u.u10;
            b.xor_slot(reg_id, mask);
        });
        return;
    }
    case GateKind::General: {
        ProfileScope profile("Rot_general", OpFamily::Interference);
        detail::apply_general(state, reg_id, bit, cc, [&u](const BasicBranch<R>&) { return u; });
        return;
    }
    }
}

/// Interference path with a branch-dependent matrix, e.g. a rotation whose
/// angle is held in another register. `matrix_for` receives the group
/// member with the target bit cleared when one exists and must not depend on
/// the target bit. Each returned matrix must be unitary; this is not checked.
template <std::size_t R, class MatrixFn>
void apply_unitary2_with(BasicSparseState<R>& state, int reg_id, unsigned bit, MatrixFn&& matrix_for,
    const ControlSpec& controls = {})
{
    ProfileScope profile("Rot_register", OpFamily::Interference);
    const std::uint64_t mask = detail::target_mask(state, reg_id, bit);
    const CompiledControls cc(state, controls, reg_id, mask);
    detail::apply_general(state, reg_id, bit, cc, matrix_for);
}

template <std::size_t R>
void apply_h(BasicSparseState<R>& state, int reg_id, unsigned bit, const ControlSpec& controls = {})
{
    apply_unitary2(state, reg_id, bit, gate::h(), controls);
}

template <std::size_t R>
void apply_z(BasicSparseState<R>& state, int reg_id, unsigned bit, const ControlSpec& controls = {})
{
    apply_phase(state, reg_id, bit, Amplitude(-1.0, 0.0), controls);
}

} // namespace sparq
