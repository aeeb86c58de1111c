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
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>

namespace sparq {

enum class OpFamily { NonInterference, Interference, Oracle, Other };

inline std::string_view to_string(OpFamily family)
{
    switch (family) {
    case OpFamily::NonInterference: return "non-interference";
    case OpFamily::Interference: return "interference";
    case OpFamily::Oracle: return "oracle";
    case OpFamily::Other: return "other";
    }
    return "other";
}

struct ProfileEntry {
    OpFamily family = OpFamily::Other;
    double total_ms = 0.0;
    std::size_t calls = 0;
};

/// Process-wide timer registry keyed by operation name. Disabled by default;
/// when disabled a ProfileScope costs one relaxed load.
class Profiler {
public:
    static Profiler& instance()
    {
        static Profiler profiler;
        return profiler;
    }

    void set_enabled(bool enabled) { enabled_ = enabled; }
    bool enabled() const { return enabled_; }

    void record(std::string_view name, OpFamily family, double ms)
    {
        std::lock_guard lock(mutex_);
        auto& entry = entries_[std::string(name)];
        entry.family = family;
        entry.total_ms += ms;
        ++entry.calls;
    }

    void clear()
    {
        std::lock_guard lock(mutex_);
        entries_.clear();
    }

    std::map<std::string, ProfileEntry> snapshot() const
    {
        std::lock_guard lock(mutex_);
        return entries_;
    }

    /// CSV with header `op,name,total_ms,calls`; `op` is the operation family.
    void dump_csv(std::ostream& out) const
    {
        std::lock_guard lock(mutex_);
        out << "op,name,total_ms,calls\n";
        for (const auto& [name, entry] : entries_) {
            out << to_string(entry.family) << ',' << name << ',' << entry.total_ms << ',' << entry.calls << '\n';
        }
    }

private:
    Profiler() = default;

    mutable std::mutex mutex_;
    std::map<std::string, ProfileEntry> entries_;
    bool enabled_ = false;
};

class ProfileScope {
public:
    ProfileScope(std::string_view name, OpFamily family)
        : name_(name)
        , family_(family)
        , active_(Profiler::instance().enabled())
    {
        if (active_) {
            start_ = std::chrono::steady_clock::now();
        }
    }

    ~ProfileScope()
    {
        if (active_) {
            const auto elapsed = std::chrono::steady_clock::now() - start_;
            Profiler::instance().record(name_, family_,
                std::chrono::duration<double, std::milli>(elapsed).count());
        }
    }

    ProfileScope(const ProfileScope&) = delete;
    ProfileScope& operator=(const ProfileScope&) = delete;

private:
    std::string_view name_;
    OpFamily family_;
    bool active_;
    std::chrono::steady_clock::time_point start_ {};
};

} // namespace sparq
