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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparq/core/sparse_state.hpp"
#include "sparq/gates/gates.hpp"
#include "sparq/qasm/ir.hpp"
#include "sparq/qram/qram.hpp"

namespace sparq::qasm {

/// Simulator registers hold at most this many qubits; wider qregs are split.
inline constexpr unsigned kChunkQubits = 64;

struct RunOptions {
    ExecConfig exec = ExecConfig::from_env();
    std::size_t shots = 0;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    std::optional<QramMemory> qram_memory;
    bool keep_state = false;
};

struct RunReport {
    std::size_t qubits = 0;
    std::vector<double> wall_ms;
    std::size_t peak_branches = 0;
    std::size_t final_branches = 0;
    double norm_error = 0.0;
    std::size_t shots = 0;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    /// Outcome string (cregs in reverse declaration order, each written from
    /// its highest bit down, separated by spaces) -> count.
    std::map<std::string, std::size_t> histogram;
    std::optional<SparseState> state;

    double mean_ms() const
    {
        double s = 0.0;
        for (double t : wall_ms) {
            s += t;
        }
        return wall_ms.empty() ? 0.0 : s / static_cast<double>(wall_ms.size());
    }
};

namespace detail {

    struct QubitRef {
        int reg_id;
        unsigned bit;
    };

    class Lowering {
    public:
        Lowering(const CircuitIR& ir, const RunOptions& options)
            : ir_(ir)
            , options_(options)
        {
            for (const auto& c : ir.cregs) {
                cbits_[c.name] = std::vector<int>(c.size, 0);
            }
        }

        SparseState fresh_state() const
        {
            SparseState s(options_.exec);
            for (const auto& r : ir_.qregs) {
                for (unsigned lo = 0; lo < r.size; lo += kChunkQubits) {
                    const std::string name = lo == 0 ? r.name : r.name + "#" + std::to_string(lo / kChunkQubits);
                    s.add_register(name, std::min(kChunkQubits, r.size - lo));
                }
            }
            return s;
        }

        /// Index of the first instruction from which only measure and
        /// barrier follow; terminal measurements can be deferred.
        std::size_t terminal_start() const
        {
            std::size_t k = ir_.body.size();
            while (k > 0 && (ir_.body[k - 1].name == "measure" || ir_.body[k - 1].name == "barrier")) {
                --k;
            }
            return k;
        }

        /// Executes the program. Measurements at or after `defer_from` are
        /// recorded in `deferred` instead of being performed.
        void execute(SparseState& s, std::mt19937_64& rng, std::size_t defer_from,
            std::vector<std::pair<QubitRef, std::pair<std::string, unsigned>>>* deferred)
        {
            for (std::size_t k = 0; k < ir_.body.size(); ++k) {
                const Instruction& ins = ir_.body[k];
                if (ins.name == "barrier") {
                    continue;
                }
                if (ins.name == "qram") {
                    run_qram(s, ins);
                    continue;
                }
                const unsigned width = broadcast_width(ins);
                for (unsigned i = 0; i < width; ++i) {
                    std::vector<QubitRef> q;
                    for (const auto& op : ins.qubits) {
                        q.push_back(ref(op.reg, op.index.value_or(i)));
                    }
                    if (ins.name == "measure") {
                        const auto& c = ins.cbits[0];
                        const std::pair<std::string, unsigned> target { c.reg, c.index.value_or(i) };
                        if (k >= defer_from && deferred != nullptr) {
                            deferred->push_back({ q[0], target });
                        } else {
                            cbits_[target.first][target.second] = measure_bit(s, q[0].reg_id, q[0].bit, rng);
                        }
                        continue;
                    }
                    apply_gate(s, ins, q);
                }
            }
        }

        std::string outcome_key() const
        {
            std::string key;
            for (auto it = ir_.cregs.rbegin(); it != ir_.cregs.rend(); ++it) {
                if (!key.empty()) {
                    key += ' ';
                }
                const auto& bits = cbits_.at(it->name);
                for (auto b = bits.rbegin(); b != bits.rend(); ++b) {
                    key += *b ? '1' : '0';
                }
            }
            return key;
        }

        void reset_cbits()
        {
            for (auto& [name, bits] : cbits_) {
                std::fill(bits.begin(), bits.end(), 0);
            }
        }

        std::map<std::string, std::vector<int>>& cbits() { return cbits_; }

    private:
        QubitRef ref(const std::string& reg, unsigned index) const
        {
            // Register ids follow declaration order, one per 64-qubit chunk.
            int id = 0;
            for (const auto& r : ir_.qregs) {
                if (r.name == reg) {
                    return { id + static_cast<int>(index / kChunkQubits), index % kChunkQubits };
                }
                id += static_cast<int>((r.size + kChunkQubits - 1) / kChunkQubits);
            }
            throw Error(Errc::UndeclaredRegister, "qreg '" + reg + "' is not declared");
        }

        unsigned broadcast_width(const Instruction& ins) const
        {
            unsigned width = 1;
            for (const auto& op : ins.qubits) {
                if (!op.index) {
                    width = std::max(width, ir_.find_qreg(op.reg)->size);
                }
            }
            return width;
        }

        void run_qram(SparseState& s, const Instruction& ins) const
        {
            if (!options_.qram_memory) {
                throw Error(Errc::InvalidArgument, "circuit uses qram but no memory was supplied");
            }
            const RegDecl* addr = ir_.find_qreg(ins.qubits[0].reg);
            const RegDecl* data = ir_.find_qreg(ins.qubits[1].reg);
            if (addr->size > kChunkQubits || data->size > kChunkQubits) {
                throw Error(Errc::WidthMismatch, "qram registers must hold at most 64 qubits");
            }
            qram_load(s, ref(addr->name, 0).reg_id, ref(data->name, 0).reg_id, *options_.qram_memory);
        }

        static void apply_gate(SparseState& s, const Instruction& ins, const std::vector<QubitRef>& q)
        {
            const std::string& n = ins.name;
            const auto& p = ins.params;
            const QubitRef t = q.back();
            ControlSpec c;
            for (std::size_t i = 0; i + 1 < q.size(); ++i) {
                c.entries.push_back({ q[i].reg_id, q[i].bit, true });
            }
            if (n == "x" || n == "cx" || n == "ccx") {
                apply_flip(s, t.reg_id, t.bit, c);
            } else if (n == "y") {
                apply_y(s, t.reg_id, t.bit);
            } else if (n == "z" || n == "cz") {
                apply_phase(s, t.reg_id, t.bit, -1.0, c);
            } else if (n == "s") {
                apply_phase(s, t.reg_id, t.bit, Amplitude(0, 1));
            } else if (n == "sdg") {
                apply_phase(s, t.reg_id, t.bit, Amplitude(0, -1));
            } else if (n == "t") {
                apply_phase(s, t.reg_id, t.bit, std::polar(1.0, std::numbers::pi / 4));
            } else if (n == "tdg") {
                apply_phase(s, t.reg_id, t.bit, std::polar(1.0, -std::numbers::pi / 4));
            } else if (n == "u1" || n == "cu1") {
                apply_phase(s, t.reg_id, t.bit, std::polar(1.0, p[0]), c);
            } else if (n == "h" || n == "ch") {
                apply_unitary2(s, t.reg_id, t.bit, gate::h(), c);
            } else if (n == "rx") {
                apply_unitary2(s, t.reg_id, t.bit, gate::rx(p[0]));
            } else if (n == "ry") {
                apply_unitary2(s, t.reg_id, t.bit, gate::ry(p[0]));
            } else if (n == "rz" || n == "crz") {
                apply_unitary2(s, t.reg_id, t.bit, gate::rz(p[0]), c);
            } else if (n == "u2") {
                apply_unitary2(s, t.reg_id, t.bit, gate::u3(std::numbers::pi / 2, p[0], p[1]));
            } else if (n == "u3" || n == "u") {
                apply_unitary2(s, t.reg_id, t.bit, gate::u3(p[0], p[1], p[2]));
            } else if (n == "swap") {
                const QubitRef a = q[0];
                apply_flip(s, a.reg_id, a.bit, { { t.reg_id, t.bit, true } });
                apply_flip(s, t.reg_id, t.bit, { { a.reg_id, a.bit, true } });
                apply_flip(s, a.reg_id, a.bit, { { t.reg_id, t.bit, true } });
            } else if (n == "id") {
                // identity
            } else {
                throw Error(Errc::UnsupportedGate, "gate '" + n + "'");
            }
        }

        const CircuitIR& ir_;
        const RunOptions& options_;
        std::map<std::string, std::vector<int>> cbits_;
    };

} // namespace detail

/// Lowers `ir` onto a fresh sparse state and runs it `trials` times.
/// Measurements that only have measurements or barriers after them are
/// deferred: shots are then sampled from the final state. Otherwise every
/// shot re-runs the circuit with collapsing measurements.
inline RunReport lower_and_run(const CircuitIR& ir, const RunOptions& options)
{
    options.exec.validate();
    detail::Lowering low(ir, options);
    const std::size_t defer_from = low.terminal_start();
    const bool deferrable = std::none_of(ir.body.begin(), ir.body.begin() + static_cast<std::ptrdiff_t>(defer_from),
        [](const Instruction& ins) { return ins.name == "measure"; });

    RunReport report;
    report.qubits = ir.qubit_count();
    report.shots = options.shots;
    report.seed = options.seed;
    report.threads = options.exec.thread_count;

    std::mt19937_64 rng(options.seed);
    std::vector<std::pair<detail::QubitRef, std::pair<std::string, unsigned>>> deferred;
    std::optional<SparseState> last;
    for (std::size_t trial = 0; trial < std::max<std::size_t>(1, options.trials); ++trial) {
        SparseState s = low.fresh_state();
        deferred.clear();
        low.reset_cbits();
        rng.seed(options.seed);
        const auto start = std::chrono::steady_clock::now();
        low.execute(s, rng, deferrable ? defer_from : ir.body.size(), &deferred);
        const auto stop = std::chrono::steady_clock::now();
        report.wall_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        last = std::move(s);
    }
    SparseState& s = *last;
    report.peak_branches = s.table().max_system_size();
    report.final_branches = s.size();
    report.norm_error = std::abs(s.norm_squared() - 1.0);

    if (options.shots > 0 && !ir.cregs.empty()) {
        if (deferrable) {
            std::vector<double> cumulative;
            cumulative.reserve(s.size());
            double acc = 0.0;
            for (const auto& b : s.branches()) {
                acc += std::norm(b.amplitude);
                cumulative.push_back(acc);
            }
            for (std::size_t shot = 0; shot < options.shots; ++shot) {
                const double u = uniform01(rng) * acc;
                const std::size_t idx = std::min<std::size_t>(
                    static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin()),
                    s.size() - 1);
                const auto& b = s.branches()[idx];
                low.reset_cbits();
                for (const auto& [q, target] : deferred) {
                    low.cbits()[target.first][target.second] = static_cast<int>((b.registers[q.reg_id] >> q.bit) & 1u);
                }
                ++report.histogram[low.outcome_key()];
            }
        } else {
            for (std::size_t shot = 0; shot < options.shots; ++shot) {
                SparseState run = low.fresh_state();
                low.reset_cbits();
                low.execute(run, rng, ir.body.size(), nullptr);
                report.peak_branches = std::max(report.peak_branches, run.table().max_system_size());
                ++report.histogram[low.outcome_key()];
            }
        }
    } else if (!deferrable) {
        ++report.histogram[low.outcome_key()];
    }
    if (options.keep_state) {
        report.state = std::move(s);
    }
    return report;
}

inline nlohmann::json report_to_json(const RunReport& r)
{
    nlohmann::json j;
    j["qubits"] = r.qubits;
    j["threads"] = r.threads;
    j["trials"] = r.wall_ms.size();
    j["wall_ms"] = r.wall_ms;
    j["wall_ms_mean"] = r.mean_ms();
    j["peak_branches"] = r.peak_branches;
    j["final_branches"] = r.final_branches;
    j["norm_error"] = r.norm_error;
    j["shots"] = r.shots;
    j["seed"] = r.seed;
    j["histogram"] = nlohmann::json::object();
    for (const auto& [k, v] : r.histogram) {
        j["histogram"][k] = v;
    }
    if (r.state) {
        nlohmann::json branches = nlohmann::json::array();
        const auto ids = r.state->table().active_ids();
        for (const auto& b : r.state->branches()) {
            nlohmann::json regs = nlohmann::json::object();
            for (int id : ids) {
                regs[r.state->table().name_of(id)] = b.registers[id];
            }
            branches.push_back({ { "amplitude", { b.amplitude.real(), b.amplitude.imag() } }, { "registers", regs } });
        }
        j["state"] = branches;
    }
    return j;
}

/// Two-column CSV (field,value); histogram entries use field "count[<key>]".
inline std::string report_to_csv(const RunReport& r)
{
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string out = "field,value\n";
    out += "qubits," + std::to_string(r.qubits) + "\n";
    out += "threads," + std::to_string(r.threads) + "\n";
    out += "trials," + std::to_string(r.wall_ms.size()) + "\n";
    out += "wall_ms_mean," + num(r.mean_ms()) + "\n";
    out += "peak_branches," + std::to_string(r.peak_branches) + "\n";
    out += "final_branches," + std::to_string(r.final_branches) + "\n";
    out += "norm_error," + num(r.norm_error) + "\n";
    out += "shots," + std::to_string(r.shots) + "\n";
    out += "seed," + std::to_string(r.seed) + "\n";
    for (const auto& [k, v] : r.histogram) {
        out += "count[" + k + "]," + std::to_string(v) + "\n";
    }
    if (r.state) {
        const auto ids = r.state->table().active_ids();
        for (std::size_t i = 0; i < r.state->size(); ++i) {
            const auto& b = r.state->branches()[i];
            std::string regs;
            for (int id : ids) {
                regs += (regs.empty() ? "" : " ") + r.state->table().name_of(id) + "=" + std::to_string(b.registers[id]);
            }
            out += "branch[" + std::to_string(i) + "]," + num(b.amplitude.real()) + (b.amplitude.imag() < 0 ? "" : "+")
                + num(b.amplitude.imag()) + "i " + regs + "\n";
        }
    }
    return out;
}

} // namespace sparq::qasm
