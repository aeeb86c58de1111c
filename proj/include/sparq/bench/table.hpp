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
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sparq/bench/circuits.hpp"
#include "sparq/exec/speedup.hpp"
#include "sparq/qasm/qasm.hpp"

namespace sparq::bench {

struct BenchCircuit {
    std::string name;
    std::string qasm;
    std::optional<QramMemory> memory;
};

struct BenchRow {
    std::string circuit;
    std::size_t qubits = 0;
    std::size_t threads = 1;
    std::size_t trials = 0;
    std::size_t sparsity = 0;
    std::size_t final_branches = 0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    std::size_t memory_proxy_bytes = 0;
    double norm_error = 0.0;
};

/// ghz{23,40,255}, qram-20, qft-{8,12,16}, swap_test-{9,13,15}.
inline std::vector<BenchCircuit> default_circuits()
{
    std::vector<BenchCircuit> out;
    for (unsigned n : { 23u, 40u, 255u }) {
        out.push_back({ "ghz-" + std::to_string(n), ghz_qasm(n), std::nullopt });
    }
    out.push_back({ "qram-20", qram_qasm(20), qram_memory(20) });
    for (unsigned n : { 8u, 12u, 16u }) {
        out.push_back({ "qft-" + std::to_string(n), qft_qasm(n), std::nullopt });
    }
    for (unsigned n : { 9u, 13u, 15u }) {
        out.push_back({ "swap_test-" + std::to_string(n), swap_test_qasm(n), std::nullopt });
    }
    return out;
}

/// Writes name.qasm (and name.json for QRAM memories) into `dir`.
inline void write_circuits(const std::filesystem::path& dir, const std::vector<BenchCircuit>& circuits)
{
    std::filesystem::create_directories(dir);
    for (const auto& c : circuits) {
        std::ofstream(dir / (c.name + ".qasm")) << c.qasm;
        if (c.memory) {
            std::ofstream(dir / (c.name + ".json")) << c.memory->to_json().dump() << '\n';
        }
    }
}

/// Every *.qasm in `dir`, sorted by name; a sibling .json is loaded as the
/// QRAM memory.
inline std::vector<BenchCircuit> load_circuits(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir)) {
        throw Error(Errc::InvalidArgument, "circuit directory '" + dir.string() + "' not found");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".qasm") {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<BenchCircuit> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        std::stringstream text;
        text << in.rdbuf();
        BenchCircuit c { f.stem().string(), text.str(), std::nullopt };
        auto sidecar = f;
        sidecar.replace_extension(".json");
        if (std::filesystem::exists(sidecar)) {
            c.memory = load_memory_file(sidecar.string());
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline std::vector<BenchRow> table_benchmark(const std::vector<BenchCircuit>& circuits,
    const std::vector<std::size_t>& thread_counts, std::size_t trials)
{
    if (trials < 1 || thread_counts.empty()) {
        throw Error(Errc::InvalidArgument, "need at least one trial and one thread count");
    }
    std::vector<BenchRow> rows;
    for (const auto& c : circuits) {
        const auto ir = qasm::parse_qasm(c.qasm);
        for (std::size_t p : thread_counts) {
            qasm::RunOptions opt;
            opt.exec.thread_count = p;
            opt.trials = trials;
            opt.qram_memory = c.memory;
            const auto rep = qasm::lower_and_run(ir, opt);
            const TimingStats st = summarize(rep.wall_ms);
            BenchRow row;
            row.circuit = c.name;
            row.qubits = rep.qubits;
            row.threads = p;
            row.trials = trials;
            row.sparsity = rep.peak_branches;
            row.final_branches = rep.final_branches;
            row.mean_ms = st.mean;
            row.stddev_ms = st.stddev;
            row.memory_proxy_bytes = rep.peak_branches * sizeof(SparseState::Branch);
            row.norm_error = rep.norm_error;
            rows.push_back(row);
        }
    }
    return rows;
}

inline void write_table_csv(std::ostream& out, const std::vector<BenchRow>& rows)
{
    out << "circuit,qubits,threads,trials,sparsity,final_branches,mean_ms,stddev_ms,memory_proxy_bytes,norm_error\n";
    out.precision(8);
    for (const auto& r : rows) {
        out << r.circuit << ',' << r.qubits << ',' << r.threads << ',' << r.trials << ',' << r.sparsity << ','
            << r.final_branches << ',' << r.mean_ms << ',' << r.stddev_ms << ',' << r.memory_proxy_bytes << ','
            << r.norm_error << '\n';
    }
}

} // namespace sparq::bench
