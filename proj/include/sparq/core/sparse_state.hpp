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
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sparq/core/branch.hpp"
#include "sparq/core/register_table.hpp"
#include "sparq/error.hpp"
#include "sparq/exec/config.hpp"
#include "sparq/exec/parallel.hpp"
#include "sparq/exec/profiler.hpp"

namespace sparq {

/// Amplitudes at or below this magnitude are treated as exact zeros.
inline constexpr double kPruneTolerance = 1e-12;

/// Largest qubit count accepted by dense export (2^26 complex doubles = 1 GiB).
inline constexpr std::size_t kMaxDenseQubits = 26;

/// Sparse quantum state: the list of branches with nonzero amplitude plus the
/// register table they share. `R` is the number of register slots carried by
/// each branch.
///
/// A fresh state holds a single branch with amplitude 1 and no registers.
template <std::size_t R = 16>
class BasicSparseState {
public:
    using Branch = BasicBranch<R>;
    static constexpr std::size_t max_registers = R;

    BasicSparseState()
        : BasicSparseState(ExecConfig::from_env())
    {
    }

    explicit BasicSparseState(ExecConfig config)
        : table_(R)
        , exec_(config)
    {
        exec_.validate();
        Branch root;
        root.amplitude = 1.0;
        branches_.push_back(root);
        table_.update_max_size(branches_.size());
    }

    /// New register initialised to |0> in every branch.
    int add_register(std::string_view name, unsigned width, RegisterType type = RegisterType::UnsignedInt)
    {
        return table_.add(name, width, type);
    }

    /// Deactivates a register that is |0> in every branch. Refuses otherwise,
    /// since dropping a nonzero register would discard information.
    void remove_register(int id)
    {
        std::as_const(table_).require_active(id);
        for (const auto& b : branches_) {
            if (b.registers[id] != 0) {
                throw Error(Errc::NonZeroContent,
                    "register '" + table_.name_of(id) + "' is not |0> in every branch");
            }
        }
        table_.deactivate(id);
    }

    void remove_register(std::string_view name) { remove_register(table_.id_of(name)); }

    std::vector<Branch>& branches() { return branches_; }
    const std::vector<Branch>& branches() const { return branches_; }
    std::size_t size() const { return branches_.size(); }

    /// Replaces every branch. Hashes are recomputed; the caller is responsible
    /// for supplying distinct register values.
    void assign(std::vector<Branch> branches)
    {
        branches_ = std::move(branches);
        for (auto& b : branches_) {
            b.rehash();
        }
        update_max_size();
    }

    const RegisterTable& table() const { return table_; }
    int id(std::string_view name) const { return table_.id_of(name); }
    std::size_t qubit_count() const { return table_.qubit_count(); }

    ExecConfig& exec() { return exec_; }
    const ExecConfig& exec() const { return exec_; }

    /// Reusable buffer for operations that rebuild the branch list.
    std::vector<Branch>& scratch() { return scratch_; }

    void update_max_size() { table_.update_max_size(branches_.size()); }

    double norm_squared() const
    {
        double total = 0.0;
        for (const auto& b : branches_) {
            total += std::norm(b.amplitude);
        }
        return total;
    }

    /// Throws std::logic_error describing the first violated invariant:
    /// inactive or out-of-width register bits, stale digests, non-finite or
    /// sub-tolerance amplitudes, or two branches with identical registers.
    void check_invariants(double tolerance = kPruneTolerance) const
    {
        std::array<std::uint64_t, R> allowed {};
        for (const auto& d : table_.descriptors()) {
            if (d.active) {
                allowed[d.id] = width_mask(d.width);
            }
        }
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
        seen.reserve(branches_.size());
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            const auto& b = branches_[i];
            for (std::size_t s = 0; s < R; ++s) {
                if ((b.registers[s] & ~allowed[s]) != 0) {
                    throw std::logic_error("branch " + std::to_string(i) + " has bits outside register slot " + std::to_string(s));
                }
            }
            if (b.cached_hash != branch_digest(b.registers)) {
                throw std::logic_error("branch " + std::to_string(i) + " has a stale digest");
            }
            if (!std::isfinite(b.amplitude.real()) || !std::isfinite(b.amplitude.imag())) {
                throw std::logic_error("branch " + std::to_string(i) + " has a non-finite amplitude");
            }
            if (std::abs(b.amplitude) <= tolerance) {
                throw std::logic_error("branch " + std::to_string(i) + " has a sub-tolerance amplitude");
            }
            auto& bucket = seen[b.cached_hash];
            for (std::size_t j : bucket) {
                if (branches_[j].registers == b.registers) {
                    throw std::logic_error("branches " + std::to_string(j) + " and " + std::to_string(i) + " share a basis state");
                }
            }
            bucket.push_back(i);
        }
    }

private:
    RegisterTable table_;
    ExecConfig exec_;
    std::vector<Branch> branches_;
    std::vector<Branch> scratch_;
};

using SparseState = BasicSparseState<16>;

template <std::size_t R>
void remove_register(BasicSparseState<R>& state, int id)
{
    state.remove_register(id);
}

/// Lexicographic order on the register slots, slot 0 most significant.
struct CanonicalOrder {
    template <std::size_t R>
    bool operator()(const BasicBranch<R>& a, const BasicBranch<R>& b) const
    {
        return a.registers < b.registers;
    }
};

/// Order used by interference operations on one target bit: every register
/// value with the target bit masked out (slot 0 most significant), then the
/// target bit itself with 0 before 1. Coherent partners end up adjacent.
struct IdleOrder {
    int slot = 0;
    std::uint64_t bit_mask = 1;

    template <std::size_t R>
    bool operator()(const BasicBranch<R>& a, const BasicBranch<R>& b) const
    {
        for (std::size_t s = 0; s < R; ++s) {
            std::uint64_t x = a.registers[s];
            std::uint64_t y = b.registers[s];
            if (static_cast<int>(s) == slot) {
                x &= ~bit_mask;
                y &= ~bit_mask;
            }
            if (x != y) {
                return x < y;
            }
        }
        return (a.registers[slot] & bit_mask) < (b.registers[slot] & bit_mask);
    }

    /// True when the branches agree on every idle qubit.
    template <std::size_t R>
    bool coherent(const BasicBranch<R>& a, const BasicBranch<R>& b) const
    {
        for (std::size_t s = 0; s < R; ++s) {
            std::uint64_t diff = a.registers[s] ^ b.registers[s];
            if (static_cast<int>(s) == slot) {
                diff &= ~bit_mask;
            }
            if (diff != 0) {
                return false;
            }
        }
        return true;
    }

    /// True when the branches agree on everything more significant than the
    /// target bit in canonical order.
    template <std::size_t R>
    bool same_prefix(const BasicBranch<R>& a, const BasicBranch<R>& b) const
    {
        for (int s = 0; s < slot; ++s) {
            if (a.registers[s] != b.registers[s]) {
                return false;
            }
        }
        const std::uint64_t high = ~((bit_mask << 1) - 1);
        return ((a.registers[slot] ^ b.registers[slot]) & high) == 0;
    }
};

namespace detail {

    template <std::size_t R>
    IdleOrder idle_order_for(const BasicSparseState<R>& state, int reg_id, unsigned bit)
    {
        const auto& d = state.table().require_active(reg_id);
        if (bit >= d.width) {
            throw Error(Errc::InvalidTarget,
                "bit " + std::to_string(bit) + " outside register '" + d.name + "' of width " + std::to_string(d.width));
        }
        return IdleOrder { reg_id, std::uint64_t { 1 } << bit };
    }

    /// Canonical order -> idle order in one pass: within each run sharing the
    /// bits above the target, the bit-0 and bit-1 blocks are each already
    /// sorted on the remaining bits and only need merging.
    template <std::size_t R>
    void canonical_to_idle(BasicSparseState<R>& state, const IdleOrder& order)
    {
        auto& v = state.branches();
        auto& out = state.scratch();
        out.clear();
        out.reserve(v.size());
        const std::size_t n = v.size();
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i + 1;
            while (j < n && order.same_prefix(v[i], v[j])) {
                ++j;
            }
            std::size_t m = i;
            while (m < j && (v[m].registers[order.slot] & order.bit_mask) == 0) {
                ++m;
            }
            std::merge(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(m),
                v.begin() + static_cast<std::ptrdiff_t>(m), v.begin() + static_cast<std::ptrdiff_t>(j),
                std::back_inserter(out), order);
            i = j;
        }
        v.swap(out);
    }

    /// Inverse of canonical_to_idle: stable partition of each prefix run by
    /// the target bit.
    template <std::size_t R>
    void idle_to_canonical(BasicSparseState<R>& state, const IdleOrder& order)
    {
        auto& v = state.branches();
        auto& out = state.scratch();
        out.clear();
        out.reserve(v.size());
        const std::size_t n = v.size();
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i + 1;
            while (j < n && order.same_prefix(v[i], v[j])) {
                ++j;
            }
            for (std::size_t k = i; k < j; ++k) {
                if ((v[k].registers[order.slot] & order.bit_mask) == 0) {
                    out.push_back(v[k]);
                }
            }
            for (std::size_t k = i; k < j; ++k) {
                if ((v[k].registers[order.slot] & order.bit_mask) != 0) {
                    out.push_back(v[k]);
                }
            }
            i = j;
        }
        v.swap(out);
    }

} // namespace detail

/// Orders branches so that coherent partners for a single-qubit operation on
/// (reg_id, bit) are adjacent; see IdleOrder. Deterministic and stable.
template <std::size_t R>
void sort_by_idle(BasicSparseState<R>& state, int reg_id, unsigned bit)
{
    ProfileScope profile("SortByIdle", OpFamily::Interference);
    const IdleOrder order = detail::idle_order_for(state, reg_id, bit);
    auto& v = state.branches();
    if (std::is_sorted(v.begin(), v.end(), order)) {
        return;
    }
    if (std::is_sorted(v.begin(), v.end(), CanonicalOrder {})) {
        detail::canonical_to_idle(state, order);
        return;
    }
    parallel_merge_sort(v, order, state.exec(), state.scratch());
}

/// Removes branches with |amplitude| <= tolerance, keeping survivor order.
template <std::size_t R>
std::size_t prune_zero(BasicSparseState<R>& state, double tolerance = kPruneTolerance)
{
    if (tolerance < 0.0) {
        throw Error(Errc::InvalidArgument, "prune tolerance must be non-negative");
    }
    return static_cast<std::size_t>(std::erase_if(state.branches(),
        [tolerance](const auto& b) { return std::abs(b.amplitude) <= tolerance; }));
}

/// Bit offset of each active register in the dense index; register id 0
/// occupies the least-significant bits.
template <std::size_t R>
std::array<unsigned, R> dense_offsets(const BasicSparseState<R>& state)
{
    std::array<unsigned, R> offsets {};
    unsigned offset = 0;
    for (const auto& d : state.table().descriptors()) {
        if (d.active) {
            offsets[d.id] = offset;
            offset += d.width;
        }
    }
    return offsets;
}

template <std::size_t R>
std::uint64_t dense_index(const BasicSparseState<R>& state, const BasicBranch<R>& branch)
{
    const auto offsets = dense_offsets(state);
    std::uint64_t index = 0;
    for (const auto& d : state.table().descriptors()) {
        if (d.active) {
            index |= branch.registers[d.id] << offsets[d.id];
        }
    }
    return index;
}

/// Full 2^n amplitude vector, for comparisons against dense simulation.
template <std::size_t R>
std::vector<Amplitude> dense_vector(const BasicSparseState<R>& state)
{
    const std::size_t n = state.qubit_count();
    if (n > kMaxDenseQubits) {
        throw Error(Errc::TooManyQubits,
            std::to_string(n) + " qubits exceeds the dense export limit of " + std::to_string(kMaxDenseQubits));
    }
    std::vector<Amplitude> dense(std::size_t { 1 } << n);
    const auto offsets = dense_offsets(state);
    const auto ids = state.table().active_ids();
    for (const auto& b : state.branches()) {
        std::uint64_t index = 0;
        for (int id : ids) {
            index |= b.registers[id] << offsets[id];
        }
        dense[index] += b.amplitude;
    }
    return dense;
}

struct RegisterSpec {
    std::string name;
    unsigned width = 1;
    RegisterType type = RegisterType::UnsignedInt;
};

/// Builds a state whose registers are `layout` (first entry gets id 0, i.e.
/// the least-significant bits) and whose branches are the entries of
/// `amplitudes` with magnitude above `tolerance`.
template <std::size_t R = 16>
BasicSparseState<R> from_dense(std::span<const RegisterSpec> layout, std::span<const Amplitude> amplitudes,
    double tolerance = 0.0, ExecConfig config = ExecConfig::from_env())
{
    BasicSparseState<R> state(config);
    unsigned total = 0;
    std::vector<int> ids;
    for (const auto& spec : layout) {
        ids.push_back(state.add_register(spec.name, spec.width, spec.type));
        total += spec.width;
    }
    if (total > kMaxDenseQubits || amplitudes.size() != (std::size_t { 1 } << total)) {
        throw Error(Errc::BadDimension,
            "amplitude vector of length " + std::to_string(amplitudes.size()) + " does not match " + std::to_string(total) + " qubits");
    }
    std::vector<BasicBranch<R>> branches;
    for (std::size_t index = 0; index < amplitudes.size(); ++index) {
        if (std::abs(amplitudes[index]) <= tolerance) {
            continue;
        }
        BasicBranch<R> b;
        b.amplitude = amplitudes[index];
        unsigned offset = 0;
        for (std::size_t k = 0; k < layout.size(); ++k) {
            b.registers[ids[k]] = (index >> offset) & width_mask(layout[k].width);
            offset += layout[k].width;
        }
        branches.push_back(b);
    }
    state.assign(std::move(branches));
    return state;
}

} // namespace sparq
