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
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "sparq/core/sparse_state.hpp"
#include "sparq/error.hpp"

namespace sparq {

struct Control {
    int reg_id = 0;
    unsigned bit = 0;
    bool value = true;
};

/// Conjunction of single-bit conditions. An empty spec is always satisfied.
struct ControlSpec {
    std::vector<Control> entries;

    ControlSpec() = default;
    ControlSpec(std::initializer_list<Control> list)
        : entries(list)
    {
    }
    explicit ControlSpec(std::vector<Control> list)
        : entries(std::move(list))
    {
    }

    bool empty() const { return entries.empty(); }

    ControlSpec with(Control c) const
    {
        ControlSpec out = *this;
        out.entries.push_back(c);
        return out;
    }
};

/// Controls folded into one (slot, mask, required bits) term per register.
class CompiledControls {
public:
    CompiledControls() = default;

    /// Checks the spec against the state's table and folds it. Pass a
    /// negative `target_reg` when the operation has no single target bit.
    template <std::size_t R>
    CompiledControls(const BasicSparseState<R>& state, const ControlSpec& spec, int target_reg = -1,
        std::uint64_t target_mask = 0)
    {
        for (std::size_t i = 0; i < spec.entries.size(); ++i) {
            const Control& c = spec.entries[i];
            const auto& d = state.table().require_active(c.reg_id);
            if (c.bit >= d.width) {
                throw Error(Errc::InvalidTarget,
                    "control bit " + std::to_string(c.bit) + " outside register '" + d.name + "'");
            }
            const std::uint64_t mask = std::uint64_t { 1 } << c.bit;
            if (c.reg_id == target_reg && (mask & target_mask) != 0) {
                throw Error(Errc::InvalidTarget, "control coincides with the target qubit");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (spec.entries[j].reg_id == c.reg_id && spec.entries[j].bit == c.bit) {
                    throw Error(Errc::InvalidTarget, "duplicate control on register '" + d.name + "'");
                }
            }
            auto it = std::find_if(terms_.begin(), terms_.end(), [&](const Term& t) { return t.slot == c.reg_id; });
            if (it == terms_.end()) {
                terms_.push_back({ c.reg_id, 0, 0 });
                it = terms_.end() - 1;
            }
            it->mask |= mask;
            if (c.value) {
                it->want |= mask;
            }
        }
    }

    bool empty() const { return terms_.empty(); }

    /// True when `registers` satisfies every condition.
    template <class Registers>
    bool test(const Registers& registers) const
    {
        for (const Term& t : terms_) {
            if ((registers[t.slot] & t.mask) != t.want) {
                return false;
            }
        }
        return true;
    }

    /// True when any condition reads register `slot`.
    bool touches(int slot) const
    {
        return std::any_of(terms_.begin(), terms_.end(), [slot](const Term& t) { return t.slot == slot; });
    }

private:
    struct Term {
        int slot;
        std::uint64_t mask;
        std::uint64_t want;
    };
    std::vector<Term> terms_;
};

} // namespace sparq
