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
#include <random>
#include <string>
#include <vector>

#include "sparq/qasm/printer.hpp"
#include "sparq/qram/qram.hpp"

namespace sparq::bench {

/// h q[0]; cx q[i],q[i+1] for i < n-1; measure.
inline std::string ghz_qasm(unsigned n)
{
    std::string s = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    s += "qreg q[" + std::to_string(n) + "];\ncreg c[" + std::to_string(n) + "];\n";
    s += "h q[0];\n";
    for (unsigned i = 0; i + 1 < n; ++i) {
        s += "cx q[" + std::to_string(i) + "],q[" + std::to_string(i + 1) + "];\n";
    }
    s += "measure q -> c;\n";
    return s;
}

/// Textbook QFT: Hadamards, controlled phases pi/2^k, then the reversal swaps.
inline std::string qft_qasm(unsigned n)
{
    std::string s = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    s += "qreg q[" + std::to_string(n) + "];\ncreg c[" + std::to_string(n) + "];\n";
    for (unsigned j = 0; j < n; ++j) {
        s += "h q[" + std::to_string(j) + "];\n";
        for (unsigned k = j + 1; k < n; ++k) {
            s += "cu1(pi/" + std::to_string(1ull << (k - j)) + ") q[" + std::to_string(k) + "],q[" + std::to_string(j) + "];\n";
        }
    }
    for (unsigned j = 0; j < n / 2; ++j) {
        s += "swap q[" + std::to_string(j) + "],q[" + std::to_string(n - 1 - j) + "];\n";
    }
    s += "measure q -> c;\n";
    return s;
}

/// Swap test on n = 2m + 1 qubits: q[0] is the ancilla, q[1..m] and
/// q[m+1..2m] hold product states with full support (fixed-seed ry/rz
/// angles). Controlled swaps use cx; ccx; cx.
inline std::string swap_test_qasm(unsigned n, std::uint64_t seed = 7)
{
    const unsigned m = (n - 1) / 2;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.2, 2.9);
    std::string s = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    s += "qreg q[" + std::to_string(n) + "];\ncreg c[1];\n";
    for (unsigned i = 1; i <= 2 * m; ++i) {
        s += "ry(" + qasm::detail::format_real(angle(rng)) + ") q[" + std::to_string(i) + "];\n";
        s += "rz(" + qasm::detail::format_real(angle(rng)) + ") q[" + std::to_string(i) + "];\n";
    }
    s += "h q[0];\n";
    for (unsigned i = 1; i <= m; ++i) {
        const std::string a = "q[" + std::to_string(i) + "]";
        const std::string b = "q[" + std::to_string(i + m) + "]";
        s += "cx " + b + "," + a + ";\nccx q[0]," + a + "," + b + ";\ncx " + b + "," + a + ";\n";
    }
    s += "h q[0];\nmeasure q[0] -> c[0];\n";
    return s;
}

/// QRAM query on n qubits: an address of n/2 qubits set to a fixed basis
/// value, one oracle call into a data register, and measurement.
inline std::string qram_qasm(unsigned n, std::uint64_t address = 0x2b5)
{
    const unsigned a = n / 2;
    const unsigned d = n - a;
    std::string s = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    s += "qreg addr[" + std::to_string(a) + "];\nqreg data[" + std::to_string(d) + "];\n";
    s += "creg c[" + std::to_string(d) + "];\n";
    for (unsigned i = 0; i < a; ++i) {
        if ((address >> i) & 1u) {
            s += "x addr[" + std::to_string(i) + "];\n";
        }
    }
    s += "qram addr,data;\nmeasure data -> c;\n";
    return s;
}

/// Memory for qram_qasm(n): 2^(n/2) pseudo-random words of n - n/2 bits.
inline QramMemory qram_memory(unsigned n, std::uint64_t seed = 20)
{
    const unsigned a = n / 2;
    const unsigned d = n - a;
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> entries(std::size_t { 1 } << a);
    for (auto& e : entries) {
        e = rng() & width_mask(d);
    }
    return QramMemory(a, d, std::move(entries));
}

} // namespace sparq::bench
