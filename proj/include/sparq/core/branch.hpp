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

#include <array>
#include <complex>
#include <cstddef>
#include <bit>
#include <cstdint>

namespace sparq {

using Amplitude = std::complex<double>;

namespace detail {

    /// Contribution of one slot to the digest; zero for a zero value.
    constexpr std::uint64_t slot_term(std::size_t slot, std::uint64_t value)
    {
        return std::rotl(value * 0x9e3779b97f4a7c15ull, static_cast<int>((slot * 23 + 1) % 64));
    }

} // namespace detail

/// 64-bit digest of a branch's register contents: an FNV-style xor fold of
/// per-slot terms, each an odd multiple of the value (a bijection, zero stays
/// zero) rotated by a slot-dependent amount. Zero slots drop out, so adding a
/// fresh register or dropping a cleared one leaves every digest unchanged,
/// and changing one slot updates the digest in O(1).
template <std::size_t R>
constexpr std::uint64_t branch_digest(const std::array<std::uint64_t, R>& registers)
{
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t slot = 0; slot < R; ++slot) {
        h ^= detail::slot_term(slot, registers[slot]);
    }
    return h;
}

/// One nonzero path of the state: amplitude plus one value per register slot.
template <std::size_t R>
struct BasicBranch {
    Amplitude amplitude { 0.0, 0.0 };
    std::array<std::uint64_t, R> registers {};
    std::uint64_t cached_hash = branch_digest(std::array<std::uint64_t, R> {});

    void rehash() { cached_hash = branch_digest(registers); }

    bool bit(int slot, unsigned digit) const { return ((registers[slot] >> digit) & 1u) != 0; }

    void set(int slot, std::uint64_t value)
    {
        const auto s = static_cast<std::size_t>(slot);
        cached_hash ^= detail::slot_term(s, registers[s]) ^ detail::slot_term(s, value);
        registers[s] = value;
    }

    void xor_slot(int slot, std::uint64_t delta) { set(slot, registers[static_cast<std::size_t>(slot)] ^ delta); }
};

template <std::size_t R>
std::uint64_t branch_digest(const BasicBranch<R>& branch)
{
    return branch_digest(branch.registers);
}

} // namespace sparq
