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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sparq::qasm {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

struct RegDecl {
    std::string name;
    unsigned size = 0;
    SourceLoc loc;

    bool operator==(const RegDecl& o) const { return name == o.name && size == o.size; }
};

/// `q[3]`, or the whole register `q` when `index` is empty.
struct Operand {
    std::string reg;
    std::optional<unsigned> index;

    bool operator==(const Operand&) const = default;
};

/// One statement. `name` is the lower-case gate name, "measure", "barrier"
/// or "qram". For measure, `qubits` holds the source and `cbits` the target.
struct Instruction {
    std::string name;
    std::vector<double> params;
    std::vector<Operand> qubits;
    std::vector<Operand> cbits;
    SourceLoc loc;

    bool operator==(const Instruction& o) const
    {
        return name == o.name && params == o.params && qubits == o.qubits && cbits == o.cbits;
    }
};

/// Parsed program. Equality ignores source locations.
struct CircuitIR {
    std::vector<RegDecl> qregs;
    std::vector<RegDecl> cregs;
    std::vector<Instruction> body;

    bool operator==(const CircuitIR&) const = default;

    const RegDecl* find_qreg(std::string_view name) const
    {
        for (const auto& r : qregs) {
            if (r.name == name) {
                return &r;
            }
        }
        return nullptr;
    }

    const RegDecl* find_creg(std::string_view name) const
    {
        for (const auto& r : cregs) {
            if (r.name == name) {
                return &r;
            }
        }
        return nullptr;
    }

    std::size_t qubit_count() const
    {
        std::size_t n = 0;
        for (const auto& r : qregs) {
            n += r.size;
        }
        return n;
    }
};

struct GateSignature {
    std::string_view name;
    unsigned params;
    unsigned qubits;
};

/// Built-in gates accepted by the parser. `qram` is an extension taking two
/// whole registers (address, data).
inline constexpr GateSignature kGates[] = {
    { "x", 0, 1 }, { "y", 0, 1 }, { "z", 0, 1 }, { "h", 0, 1 }, { "s", 0, 1 }, { "sdg", 0, 1 }, { "t", 0, 1 },
    { "tdg", 0, 1 }, { "id", 0, 1 }, { "rx", 1, 1 }, { "ry", 1, 1 }, { "rz", 1, 1 }, { "u1", 1, 1 }, { "u2", 2, 1 },
    { "u3", 3, 1 }, { "u", 3, 1 }, { "cx", 0, 2 }, { "cz", 0, 2 }, { "ch", 0, 2 }, { "swap", 0, 2 }, { "ccx", 0, 3 },
    { "crz", 1, 2 }, { "cu1", 1, 2 },
};

inline const GateSignature* find_gate(std::string_view name)
{
    for (const auto& g : kGates) {
        if (g.name == name) {
            return &g;
        }
    }
    return nullptr;
}

} // namespace sparq::qasm
