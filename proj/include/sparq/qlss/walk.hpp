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

#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sparq/core/sparse_state.hpp"
#include "sparq/gates/gates.hpp"
#include "sparq/qlss/angle_tree.hpp"
#include "sparq/qlss/linear_system.hpp"
#include "sparq/qram/qram.hpp"

namespace sparq::qlss {

/// Register ids in a state built by QlssCircuit::make_state. Slot order is
/// significance order; the QRAM data register comes last so loading into it
/// keeps the canonical branch order. `a1` is -1 for the PD variant.
struct QlssLayout {
    int h = 0;
    int c = 1;
    int flag = 2;
    int a1 = -1;
    int target = 3;
    int anc = 4;
    int qram = 5;
    unsigned n = 0;
};

/// f(s) = kappa/(kappa-1) * (1 - 1/(1 + s(kappa-1))).
inline double rational_schedule(double s, double kappa)
{
    return kappa / (kappa - 1.0) * (1.0 - 1.0 / (1.0 + s * (kappa - 1.0)));
}

/// Circuits for the discrete adiabatic solver of one linear system.
///
/// U_A = SWAP . U_R^dagger . U_L on (target, qram, anc) has
/// <i,0,0|U_A|j,0,0> = A_ij / ||A||_F. U_L prepares column j of A on anc
/// controlled by target = j; U_R prepares the column-norm vector on target.
/// Both read their rotation angles through QRAM.
///
/// The walk operator is W(s) = R . U_H(f(s)), where U_H block-encodes
/// H(f) = [[0, A(f) Q_b], [Q_b A(f), 0]] with the h qubit selecting the block.
template <std::size_t R = 8>
class QlssCircuit {
public:
    using State = BasicSparseState<R>;

    explicit QlssCircuit(LinearSystem system)
        : sys_(std::move(system))
    {
        const AngleTrees trees = build_angle_trees(sys_.A);
        alpha_ = trees.frobenius;
        columns_ = tree_memories(trees.columns);
        norms_ = tree_memories(trees.norms);
        b_ = tree_memories(build_tree(sys_.b));
        layout_.n = sys_.n;
        if (sys_.variant == Variant::NonHermitian) {
            layout_ = QlssLayout { 0, 1, 2, 3, 4, 5, 6, sys_.n };
        }
    }

    const LinearSystem& system() const { return sys_; }
    const QlssLayout& layout() const { return layout_; }
    double frobenius() const { return alpha_; }
    bool non_hermitian() const { return sys_.variant == Variant::NonHermitian; }

    /// Fresh state with every register in |0>.
    State make_state(ExecConfig config = ExecConfig::from_env()) const
    {
        State s(config);
        s.add_register("h", 1);
        s.add_register("c", 1);
        s.add_register("flag", 1);
        if (non_hermitian()) {
            s.add_register("a1", 1);
        }
        s.add_register("target", sys_.n);
        s.add_register("anc", sys_.n);
        s.add_register("qram", 64);
        return s;
    }

    /// Descends `tree` onto `target_reg`, with `index_reg` selecting the
    /// column when the tree has several. Rotations and sign flips obey
    /// `controls`; the QRAM loads around them are unconditional because
    /// each load is undone before the address can change.
    void prepare_tree(State& s, const TreeMemories& tree, int target_reg, int index_reg, const ControlSpec& controls,
        bool inverse) const
    {
        const unsigned n = tree.depth;
        auto sign_step = [&] {
            if (!tree.has_negative) {
                return;
            }
            const AddressField fields[] = { { target_reg, 0, n }, { index_reg < 0 ? target_reg : index_reg, 0, tree.index_bits } };
            qram_load(s, fields, layout_.qram, tree.signs);
            apply_phase(s, layout_.qram, 0, Amplitude(-1.0, 0.0), controls);
            qram_load(s, fields, layout_.qram, tree.signs);
        };
        auto level_step = [&](unsigned l) {
            const AddressField fields[] = { { target_reg, n - l, l }, { index_reg < 0 ? target_reg : index_reg, 0, tree.index_bits } };
            const int q = layout_.qram;
            const double sign = inverse ? -1.0 : 1.0;
            qram_load(s, fields, q, tree.levels[l]);
            apply_unitary2_with(s, target_reg, n - 1 - l, [q, sign](const typename State::Branch& b) {
                return gate::ry(sign * std::bit_cast<double>(b.registers[q]));
            }, controls);
            qram_load(s, fields, q, tree.levels[l]);
        };
        if (!inverse) {
            for (unsigned l = 0; l < n; ++l) {
                level_step(l);
            }
            sign_step();
        } else {
            sign_step();
            for (unsigned l = n; l-- > 0;) {
                level_step(l);
            }
        }
    }

    /// U_b (or its inverse) on the target register.
    void apply_Ub(State& s, const ControlSpec& controls, bool inverse) const
    {
        prepare_tree(s, b_, layout_.target, -1, controls, inverse);
    }

    void apply_swap(State& s, const ControlSpec& controls) const
    {
        arith_xor_reg(s, layout_.target, layout_.anc, controls);
        arith_xor_reg(s, layout_.anc, layout_.target, controls);
        arith_xor_reg(s, layout_.target, layout_.anc, controls);
    }

    void apply_UA(State& s, const ControlSpec& controls, bool adjoint) const
    {
        if (!adjoint) {
            prepare_tree(s, columns_, layout_.anc, layout_.target, controls, false);
            prepare_tree(s, norms_, layout_.target, -1, controls, true);
            apply_swap(s, controls);
        } else {
            apply_swap(s, controls);
            prepare_tree(s, norms_, layout_.target, -1, controls, false);
            prepare_tree(s, columns_, layout_.anc, layout_.target, controls, true);
        }
    }

    /// Block-encodes [[0, A], [A^T, 0]] on (a1, target):
    /// X_a1 . (|0><0| (x) U_A^dagger + |1><1| (x) U_A).
    void apply_UA_dilated(State& s, const ControlSpec& controls, bool adjoint) const
    {
        const int a1 = layout_.a1;
        if (!adjoint) {
            apply_UA(s, controls.with({ a1, 0, true }), false);
            apply_UA(s, controls.with({ a1, 0, false }), true);
            apply_flip(s, a1, 0, controls);
        } else {
            apply_flip(s, a1, 0, controls);
            apply_UA(s, controls.with({ a1, 0, true }), true);
            apply_UA(s, controls.with({ a1, 0, false }), false);
        }
    }

    /// Block-encoding of A(f) = (1-f) H0 + f H1 with H0 = I (PD) or Z on a1
    /// (NH) and H1 = A (PD) or the dilated A (NH). Prepares c with amplitudes
    /// proportional to (1-f, f ||A||_F), selects, and unprepares with H.
    /// Returns the normalization sqrt(2) * hypot(1-f, f ||A||_F).
    double apply_BAf(State& s, double f, const ControlSpec& controls, bool adjoint) const
    {
        const double w0 = 1.0 - f;
        const double w1 = f * alpha_;
        const double theta = 2.0 * std::atan2(w1, w0);
        const int c = layout_.c;
        auto select = [&](bool adj) {
            if (non_hermitian()) {
                apply_phase(s, layout_.a1, 0, Amplitude(-1.0, 0.0), controls.with({ c, 0, false }));
                apply_UA_dilated(s, controls.with({ c, 0, true }), adj);
            } else {
                apply_UA(s, controls.with({ c, 0, true }), adj);
            }
        };
        if (!adjoint) {
            apply_unitary2(s, c, 0, gate::ry(theta), controls);
            select(false);
            apply_unitary2(s, c, 0, gate::h(), controls);
        } else {
            apply_unitary2(s, c, 0, gate::h(), controls);
            select(true);
            apply_unitary2(s, c, 0, gate::ry(-theta), controls);
        }
        return std::sqrt(2.0) * std::hypot(w0, w1);
    }

    /// U_b . F . U_b^dagger, where F flips `flag` when the system register
    /// is |0>. Its flag = 0 block is Q_b = I - |b><b|. Self-inverse.
    void apply_BQ(State& s, const ControlSpec& controls) const
    {
        apply_Ub(s, controls, true);
        ControlSpec zero = controls;
        for (unsigned i = 0; i < sys_.n; ++i) {
            zero.entries.push_back({ layout_.target, i, false });
        }
        if (non_hermitian()) {
            zero.entries.push_back({ layout_.a1, 0, false });
        }
        apply_flip(s, layout_.flag, 0, zero);
        apply_Ub(s, controls, false);
    }

    /// B = B_A(f) . B_Q, block A(f) Q_b / alpha(f).
    double apply_B(State& s, double f, const ControlSpec& controls, bool adjoint) const
    {
        if (!adjoint) {
            apply_BQ(s, controls);
            return apply_BAf(s, f, controls, false);
        }
        const double alpha = apply_BAf(s, f, controls, true);
        apply_BQ(s, controls);
        return alpha;
    }

    /// U_H = X_h . (|0><0|_h (x) B^dagger + |1><1|_h (x) B); Hermitian, with
    /// block H(f) / alpha(f). Returns alpha(f).
    double apply_UH(State& s, double f) const
    {
        const int h = layout_.h;
        const double alpha = apply_B(s, f, { { h, 0, true } }, false);
        apply_B(s, f, { { h, 0, false } }, true);
        apply_flip(s, h, 0);
        return alpha;
    }

    /// i(2P - I), P the projector onto c = flag = anc = qram = 0.
    void apply_R(State& s) const
    {
        const QlssLayout L = layout_;
        parallel_for_branches(std::span(s.branches()), [L](typename State::Branch& b) {
            const bool zero = b.registers[L.c] == 0 && b.registers[L.flag] == 0 && b.registers[L.anc] == 0
                && b.registers[L.qram] == 0;
            b.amplitude *= zero ? Amplitude(0.0, 1.0) : Amplitude(0.0, -1.0);
        }, s.exec());
    }

    void walk_step(State& s, double f) const
    {
        apply_UH(s, f);
        apply_R(s);
    }

    /// |h=0>|0>_anc|b> (and a1 = 0 for NH).
    State initial_state(ExecConfig config = ExecConfig::from_env()) const
    {
        State s = make_state(config);
        apply_Ub(s, {}, false);
        return s;
    }

    /// Amplitudes on the system register (a1 then target for NH) with h and
    /// every ancilla zero.
    Eigen::VectorXcd project(const State& s) const
    {
        const std::size_t N = sys_.N;
        Eigen::VectorXcd p = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(non_hermitian() ? 2 * N : N));
        for (const auto& b : s.branches()) {
            if (b.registers[layout_.h] != 0 || b.registers[layout_.c] != 0 || b.registers[layout_.flag] != 0
                || b.registers[layout_.anc] != 0 || b.registers[layout_.qram] != 0) {
                continue;
            }
            std::size_t idx = b.registers[layout_.target];
            if (non_hermitian()) {
                idx += b.registers[layout_.a1] * N;
            }
            p(static_cast<Eigen::Index>(idx)) += b.amplitude;
        }
        return p;
    }

    /// Normalized solution embedded the same way as project(): x~ for PD,
    /// |a1 = 1>|x~> for NH.
    Eigen::VectorXd reference() const
    {
        const Eigen::VectorXd x = reference_solution(sys_);
        if (!non_hermitian()) {
            return x;
        }
        Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * sys_.N));
        out.tail(static_cast<Eigen::Index>(sys_.N)) = x;
        return out;
    }

private:
    LinearSystem sys_;
    QlssLayout layout_;
    double alpha_ = 0.0;
    TreeMemories columns_;
    TreeMemories norms_;
    TreeMemories b_;
};

/// Raises TargetNotZero unless `target` is |0> in every branch, then
/// prepares |b> there.
template <std::size_t R>
void state_prep_Ub(const QlssCircuit<R>& circuit, BasicSparseState<R>& s)
{
    for (const auto& b : s.branches()) {
        if (b.registers[circuit.layout().target] != 0) {
            throw Error(Errc::TargetNotZero, "target register is not |0>");
        }
    }
    circuit.apply_Ub(s, {}, false);
}

/// Raises AncillaNotZero unless anc and qram are |0> in every branch, then
/// applies U_A (or its adjoint).
template <std::size_t R>
void block_encode_A(const QlssCircuit<R>& circuit, BasicSparseState<R>& s, bool adjoint = false)
{
    for (const auto& b : s.branches()) {
        if (b.registers[circuit.layout().anc] != 0 || b.registers[circuit.layout().qram] != 0) {
            throw Error(Errc::AncillaNotZero, "ancilla or qram register is not |0>");
        }
    }
    circuit.apply_UA(s, {}, adjoint);
}

/// Applies U_H(f) and returns its normalization alpha(f).
template <std::size_t R>
double block_encode_Hs(const QlssCircuit<R>& circuit, BasicSparseState<R>& s, double f)
{
    if (!(f >= 0.0 && f <= 1.0)) {
        throw Error(Errc::InvalidArgument, "f must lie in [0, 1]");
    }
    return circuit.apply_UH(s, f);
}

template <std::size_t R>
void reflection_R(const QlssCircuit<R>& circuit, BasicSparseState<R>& s)
{
    circuit.apply_R(s);
}

/// The null eigenvector of H splits into W-eigenvalues +1 and -1, so the
/// state is back in the ancilla-zero block only after an even number of
/// steps. Odd T leaves nothing to project (error_metric throws).
struct WalkConfig {
    std::size_t T = 2;
    /// Maps s in [0, 1] to f in [0, 1]; empty means rational_schedule.
    std::function<double(double)> schedule;
};

/// Prepares the initial state and applies W(k/T) for k = 0..T-1.
template <std::size_t R>
BasicSparseState<R> run_adiabatic(const QlssCircuit<R>& circuit, const WalkConfig& config,
    ExecConfig exec = ExecConfig::from_env())
{
    if (config.T < 1) {
        throw Error(Errc::InvalidArgument, "T must be at least 1");
    }
    const double kappa = circuit.system().kappa;
    auto f = config.schedule ? config.schedule : [kappa](double s) { return rational_schedule(s, kappa); };
    auto s = circuit.initial_state(exec);
    for (std::size_t k = 0; k < config.T; ++k) {
        circuit.walk_step(s, f(static_cast<double>(k) / static_cast<double>(config.T)));
    }
    return s;
}

/// Phase-invariant distance sqrt(2 - 2|<x~|psi>|) between the reference
/// solution and the renormalized projection onto h = 0 with all ancillas 0.
template <std::size_t R>
double error_metric(const QlssCircuit<R>& circuit, const BasicSparseState<R>& s)
{
    const Eigen::VectorXcd p = circuit.project(s);
    const double norm = p.norm();
    if (norm < 1e-9) {
        throw Error(Errc::ZeroProjection, "projected norm " + std::to_string(norm) + " is below 1e-9");
    }
    const Eigen::VectorXcd x = circuit.reference().template cast<std::complex<double>>();
    const double overlap = std::min(1.0, std::abs(x.dot(p)) / norm);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

} // namespace sparq::qlss
