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
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparq/core/sparse_state.hpp"
#include "sparq/error.hpp"
#include "sparq/exec/profiler.hpp"
#include "sparq/gates/controls.hpp"
#include "sparq/gates/ops.hpp"

namespace sparq {

/// Classical memory behind the QRAM oracle: 2^addr_width words of
/// word_width bits each.
class QramMemory {
public:
    QramMemory() = default;

    QramMemory(unsigned addr_width, unsigned word_width, std::vector<std::uint64_t> entries)
        : addr_width_(addr_width)
        , word_width_(word_width)
        , entries_(std::move(entries))
    {
        if (addr_width_ > 32) {
            throw Error(Errc::WidthOutOfRange, "address width " + std::to_string(addr_width_) + " exceeds 32");
        }
        if (word_width_ < 1 || word_width_ > 64) {
            throw Error(Errc::WidthOutOfRange, "word width " + std::to_string(word_width_) + " outside 1..64");
        }
        if (entries_.size() != (std::size_t { 1 } << addr_width_)) {
            throw Error(Errc::ParseError,
                "memory has " + std::to_string(entries_.size()) + " entries, expected 2^" + std::to_string(addr_width_));
        }
        const std::uint64_t limit = width_mask(word_width_);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i] > limit) {
                throw Error(Errc::EntryOutOfRange,
                    "entry " + std::to_string(i) + " = " + std::to_string(entries_[i]) + " does not fit in "
                        + std::to_string(word_width_) + " bits");
            }
        }
    }

    unsigned addr_width() const { return addr_width_; }
    unsigned word_width() const { return word_width_; }
    std::size_t size() const { return entries_.size(); }
    std::uint64_t operator[](std::size_t address) const { return entries_[address]; }
    std::span<const std::uint64_t> entries() const { return entries_; }

    nlohmann::json to_json() const
    {
        return { { "addr_width", addr_width_ }, { "word_width", word_width_ }, { "entries", entries_ } };
    }

    static QramMemory from_json(const nlohmann::json& j)
    {
        try {
            if (!j.is_object()) {
                throw Error(Errc::ParseError, "memory must be a JSON object");
            }
            const auto& entries = j.at("entries");
            if (!entries.is_array()) {
                throw Error(Errc::ParseError, "'entries' must be an array");
            }
            std::vector<std::uint64_t> values;
            values.reserve(entries.size());
            for (const auto& e : entries) {
                if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0)) {
                    throw Error(Errc::ParseError, "entries must be unsigned integers");
                }
                values.push_back(e.get<std::uint64_t>());
            }
            return QramMemory(j.at("addr_width").get<unsigned>(), j.at("word_width").get<unsigned>(), std::move(values));
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError, e.what());
        }
    }

private:
    unsigned addr_width_ = 0;
    unsigned word_width_ = 1;
    std::vector<std::uint64_t> entries_ { 0 };
};

/// Reads {addr_width, word_width, entries} from a JSON file.
inline QramMemory load_memory_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::ParseError, "cannot open memory file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, "'" + path + "': " + e.what());
    }
    return QramMemory::from_json(j);
}

/// One slice of an address assembled from several registers.
struct AddressField {
    int reg_id = 0;
    unsigned low_bit = 0;
    unsigned width = 0;
};

namespace detail {

    template <std::size_t R>
    void check_fields(const BasicSparseState<R>& state, std::span<const AddressField> fields, int data_id,
        const QramMemory& memory)
    {
        const auto& data = state.table().require_active(data_id);
        unsigned total = 0;
        for (const auto& f : fields) {
            const auto& d = state.table().require_active(f.reg_id);
            if (f.reg_id == data_id) {
                throw Error(Errc::AliasedRegisters, "address and data register coincide");
            }
            if (f.low_bit + f.width > d.width) {
                throw Error(Errc::WidthMismatch, "address field exceeds register '" + d.name + "'");
            }
            total += f.width;
        }
        if (total != memory.addr_width()) {
            throw Error(Errc::WidthMismatch,
                "address width " + std::to_string(total) + " != memory address width " + std::to_string(memory.addr_width()));
        }
        if (data.width != memory.word_width()) {
            throw Error(Errc::WidthMismatch,
                "data register width " + std::to_string(data.width) + " != word width " + std::to_string(memory.word_width()));
        }
    }

} // namespace detail

/// |i>|j> -> |i>|j xor d_i>, where the address i concatenates `fields`
/// with the first field in the least-significant position. Self-inverse.
template <std::size_t R>
void qram_load(BasicSparseState<R>& state, std::span<const AddressField> fields, int data_id, const QramMemory& memory,
    const ControlSpec& controls = {})
{
    ProfileScope profile("QRAMLoad", OpFamily::Oracle);
    detail::check_fields(state, fields, data_id, memory);
    const CompiledControls cc(state, controls, data_id, width_mask(memory.word_width()));
    const std::vector<AddressField> f(fields.begin(), fields.end());
    detail::for_each_controlled(state, cc, [&f, data_id, &memory](BasicBranch<R>& b) {
        std::uint64_t address = 0;
        unsigned shift = 0;
        for (const auto& field : f) {
            address |= ((b.registers[field.reg_id] >> field.low_bit) & width_mask(field.width)) << shift;
            shift += field.width;
        }
        b.xor_slot(data_id, memory[address]);
    });
}

/// Whole-register form: width(addr) must equal the memory's address width
/// and width(data) its word width.
template <std::size_t R>
void qram_load(BasicSparseState<R>& state, int addr_id, int data_id, const QramMemory& memory,
    const ControlSpec& controls = {})
{
    const AddressField field { addr_id, 0, state.table().width_of(addr_id) };
    qram_load(state, std::span<const AddressField>(&field, 1), data_id, memory, controls);
}

} // namespace sparq
