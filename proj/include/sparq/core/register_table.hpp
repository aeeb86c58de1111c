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
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparq/error.hpp"

namespace sparq {

enum class RegisterType { Boolean, UnsignedInt };

/// All-ones mask of the low `width` bits (width 64 included).
constexpr std::uint64_t width_mask(unsigned width)
{
    return width >= 64 ? ~std::uint64_t { 0 } : ((std::uint64_t { 1 } << width) - 1);
}

struct RegisterDescriptor {
    int id = -1;
    std::string name;
    unsigned width = 0;
    RegisterType type = RegisterType::UnsignedInt;
    bool active = false;
};

/// Register metadata shared by every branch of a state: names, widths,
/// activity flags and the high-water marks of the simulation.
///
/// Slot ids are handed out in increasing order while free slots remain, so a
/// removed register's name can be re-added under a new id; once every slot
/// has been used, the lowest inactive slot is recycled.
class RegisterTable {
public:
    explicit RegisterTable(std::size_t capacity)
        : capacity_(capacity)
    {
    }

    int add(std::string_view name, unsigned width, RegisterType type)
    {
        if (width < 1 || width > 64) {
            throw Error(Errc::WidthOutOfRange,
                "register '" + std::string(name) + "' width " + std::to_string(width) + " outside 1..64");
        }
        if (name_index_.contains(std::string(name))) {
            throw Error(Errc::DuplicateName, "register '" + std::string(name) + "' already exists");
        }
        int id = -1;
        if (descriptors_.size() < capacity_) {
            id = static_cast<int>(descriptors_.size());
            descriptors_.emplace_back();
        } else {
            auto it = std::find_if(descriptors_.begin(), descriptors_.end(),
                [](const RegisterDescriptor& d) { return !d.active; });
            if (it == descriptors_.end()) {
                throw Error(Errc::TooManyRegisters,
                    "all " + std::to_string(capacity_) + " register slots are in use");
            }
            id = it->id;
        }
        descriptors_[id] = RegisterDescriptor { id, std::string(name), width, type, true };
        name_index_.emplace(std::string(name), id);
        qubit_count_ += width;
        max_qubit_count_ = std::max(max_qubit_count_, qubit_count_);
        max_register_count_ = std::max(max_register_count_, active_register_count());
        return id;
    }

    void deactivate(int id)
    {
        auto& d = require_active(id);
        name_index_.erase(d.name);
        qubit_count_ -= d.width;
        d.active = false;
    }

    const RegisterDescriptor& get(int id) const
    {
        if (id < 0 || static_cast<std::size_t>(id) >= descriptors_.size()) {
            throw Error(Errc::NotActive, "register id " + std::to_string(id) + " was never allocated");
        }
        return descriptors_[id];
    }

    const RegisterDescriptor& require_active(int id) const
    {
        const auto& d = get(id);
        if (!d.active) {
            throw Error(Errc::NotActive, "register id " + std::to_string(id) + " is inactive");
        }
        return d;
    }

    std::optional<int> find(std::string_view name) const
    {
        auto it = name_index_.find(std::string(name));
        if (it == name_index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    int id_of(std::string_view name) const
    {
        if (auto id = find(name)) {
            return *id;
        }
        throw Error(Errc::NotActive, "no active register named '" + std::string(name) + "'");
    }

    const std::string& name_of(int id) const { return get(id).name; }
    unsigned width_of(int id) const { return require_active(id).width; }
    RegisterType type_of(int id) const { return get(id).type; }
    bool is_active(int id) const
    {
        return id >= 0 && static_cast<std::size_t>(id) < descriptors_.size() && descriptors_[id].active;
    }

    std::span<const RegisterDescriptor> descriptors() const { return descriptors_; }

    std::vector<int> active_ids() const
    {
        std::vector<int> ids;
        for (const auto& d : descriptors_) {
            if (d.active) {
                ids.push_back(d.id);
            }
        }
        return ids;
    }

    std::size_t capacity() const { return capacity_; }
    std::size_t qubit_count() const { return qubit_count_; }
    std::size_t active_register_count() const
    {
        return static_cast<std::size_t>(std::count_if(descriptors_.begin(), descriptors_.end(),
            [](const RegisterDescriptor& d) { return d.active; }));
    }

    std::size_t max_qubit_count() const { return max_qubit_count_; }
    std::size_t max_register_count() const { return max_register_count_; }
    std::size_t max_system_size() const { return max_system_size_; }
    void update_max_size(std::size_t branch_count) { max_system_size_ = std::max(max_system_size_, branch_count); }

private:
    RegisterDescriptor& require_active(int id)
    {
        return const_cast<RegisterDescriptor&>(std::as_const(*this).require_active(id));
    }

    std::size_t capacity_;
    std::vector<RegisterDescriptor> descriptors_;
    std::map<std::string, int, std::less<>> name_index_;
    std::size_t qubit_count_ = 0;
    std::size_t max_qubit_count_ = 0;
    std::size_t max_register_count_ = 0;
    std::size_t max_system_size_ = 0;
};

} // namespace sparq
