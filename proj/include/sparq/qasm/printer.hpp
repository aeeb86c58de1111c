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

#include <cstdio>
#include <string>

#include "sparq/qasm/ir.hpp"

namespace sparq::qasm {

namespace detail {

    inline std::string format_real(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    inline std::string format_operand(const Operand& op)
    {
        return op.index ? op.reg + "[" + std::to_string(*op.index) + "]" : op.reg;
    }

} // namespace detail

/// Canonical OpenQASM 2.0 text for `ir`. Parameters are printed with 17
/// significant digits so parse(print(ir)) == ir.
inline std::string print_qasm(const CircuitIR& ir)
{
    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    for (const auto& r : ir.qregs) {
        out += "qreg " + r.name + "[" + std::to_string(r.size) + "];\n";
    }
    for (const auto& r : ir.cregs) {
        out += "creg " + r.name + "[" + std::to_string(r.size) + "];\n";
    }
    for (const auto& ins : ir.body) {
        out += ins.name;
        if (!ins.params.empty()) {
            out += "(";
            for (std::size_t i = 0; i < ins.params.size(); ++i) {
                out += (i ? "," : "") + detail::format_real(ins.params[i]);
            }
            out += ")";
        }
        for (std::size_t i = 0; i < ins.qubits.size(); ++i) {
            out += (i ? "," : " ") + detail::format_operand(ins.qubits[i]);
        }
        if (!ins.cbits.empty()) {
            out += " -> " + detail::format_operand(ins.cbits[0]);
        }
        out += ";\n";
    }
    return out;
}

} // namespace sparq::qasm
