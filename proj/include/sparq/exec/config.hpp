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

#include <cstddef>
#include <cstdlib>
#include <string>

#include "sparq/error.hpp"

namespace sparq {

/// Parallel execution knobs shared by every operation on a state.
/// Branch loops only fork when the state holds at least `threshold`
/// branches; each worker then takes `chunk_size` branches at a time.
struct ExecConfig {
    std::size_t thread_count = 1;
    std::size_t threshold = 4096;
    std::size_t chunk_size = 8192;

    void validate() const
    {
        if (thread_count == 0 || threshold == 0 || chunk_size == 0) {
            throw Error(Errc::InvalidArgument,
                "thread_count, threshold and chunk_size must be positive");
        }
    }

    /// Defaults overridden by SPARQ_THREADS, SPARQ_THRESHOLD and
    /// SPARQ_CHUNK_SIZE when they hold positive integers.
    static ExecConfig from_env()
    {
        ExecConfig config;
        read_env("SPARQ_THREADS", config.thread_count);
        read_env("SPARQ_THRESHOLD", config.threshold);
        read_env("SPARQ_CHUNK_SIZE", config.chunk_size);
        return config;
    }

private:
    static void read_env(const char* name, std::size_t& out)
    {
        const char* raw = std::getenv(name);
        if (raw == nullptr) {
            return;
        }
        try {
            const long long value = std::stoll(raw);
            if (value > 0) {
                out = static_cast<std::size_t>(value);
            }
        } catch (const std::exception&) {
            // unparsable values keep the default
        }
    }
};

} // namespace sparq
