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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sparq/gates/gates.hpp"
#include "support/dense_oracle.hpp"
#include "support/random_circuit.hpp"

using namespace sparq;
using namespace testing_support;

TEST(Flip, BasicAndInvolution)
{
    SparseState s;
    const int q = s.add_register("q", 1);
    apply_flip(s, q, 0);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.branches()[0].registers[q], 1u);
    EXPECT_EQ(s.branches()[0].amplitude, Amplitude(1.0));
    apply_flip(s, q, 0);
    EXPECT_EQ(s.branches()[0].registers[q], 0u);
    EXPECT_THROW(apply_flip(s, q, 1), Error);
}

TEST(Flip, ControlledOnGhz)
{
    SparseState s;
    const int q = s.add_register("q", 3);
    apply_h(s, q, 0);
    apply_flip(s, q, 1, { { q, 0 } });
    apply_flip(s, q, 2, { { q, 1 } });
    apply_flip(s, q, 0, { { q, 2 } });

    oracle::DenseSim ref(3);
    ref.apply(0, oracle::mat::h());
    ref.apply(1, oracle::mat::x(), { { 0, true } });
    ref.apply(2, oracle::mat::x(), { { 1, true } });
    ref.apply(0, oracle::mat::x(), { { 2, true } });
    EXPECT_LE(oracle::max_abs_diff(dense_vector(s), ref.amplitudes()), 1e-15);
    EXPECT_NEAR(std::abs(ref.amplitudes()[6]), std::sqrt(0.5), 1e-15);
}

TEST(Controls, Validation)
{
    SparseState s;
    const int q = s.add_register("q", 2);
    try {
        apply_flip(s, q, 0, { { q, 0 } });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidTarget);
    }
    EXPECT_THROW(apply_flip(s, q, 0, { { q, 1 }, { q, 1 } }), Error);
    EXPECT_THROW(apply_flip(s, q, 0, { { q, 2 } }), Error);
    EXPECT_THROW(apply_flip(s, q, 0, { { 5, 0 } }), Error);
}

TEST(Phase, ZOnPlus)
{
    SparseState s;
    const int q = s.add_register("q", 1);
    apply_h(s, q, 0);
    apply_z(s, q, 0);
    const auto v = dense_vector(s);
    EXPECT_NEAR(v[0].real(), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(v[1].real(), -std::sqrt(0.5), 1e-15);
}

TEST(Phase, SSquaredIsZ)
{
    std::mt19937_64 rng(1);
    const Layout L({ 3, 2 });
    auto a = random_sparse(rng, L, 20);
    auto b = a;
    apply_phase(a, 0, 1, Amplitude(0, 1));
    apply_phase(a, 0, 1, Amplitude(0, 1));
    apply_z(b, 0, 1);
    EXPECT_LE(oracle::max_abs_diff(dense_vector(a), dense_vector(b)), 1e-15);
}

TEST(Phase, OnlyOneBranchesChangeAndModulusChecked)
{
    SparseState s;
    const int q = s.add_register("q", 2);
    apply_phase(s, q, 1, std::polar(1.0, 0.7));
    EXPECT_EQ(s.branches()[0].amplitude, Amplitude(1.0));
    try {
        apply_phase(s, q, 0, 1.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonUnitPhase);
    }
}

TEST(YGate, ColumnsAndInvolution)
{
    SparseState s;
    const int q = s.add_register("q", 1);
    apply_y(s, q, 0);
    EXPECT_EQ(s.branches()[0].registers[q], 1u);
    EXPECT_EQ(s.branches()[0].amplitude, Amplitude(0, 1));
    apply_y(s, q, 0);
    EXPECT_EQ(s.branches()[0].registers[q], 0u);
    EXPECT_EQ(s.branches()[0].amplitude, Amplitude(1.0));
}

TEST(YGate, MatchesDenseOnRandomState)
{
    std::mt19937_64 rng(4);
    const Layout L({ 2, 3 });
    auto s = random_sparse(rng, L, 10);
    oracle::DenseSim ref(L.qubits, dense_vector(s));
    apply_y(s, 1, 2, { { 0, 1, false } });
    ref.apply(L.global(1, 2), oracle::mat::y(), { { L.global(0, 1), false } });
    EXPECT_LE(oracle::max_abs_diff(dense_vector(s), ref.amplitudes()), 1e-15);
}

TEST(Unitary2, KindAndValidation)
{
    EXPECT_EQ(gate::rz(0.4).kind(), GateKind::Diagonal);
    EXPECT_EQ(gate::z().kind(), GateKind::Diagonal);
    EXPECT_EQ(gate::x().kind(), GateKind::AntiDiagonal);
    EXPECT_EQ(gate::y().kind(), GateKind::AntiDiagonal);
    EXPECT_EQ(gate::h().kind(), GateKind::General);
    EXPECT_EQ(gate::ry(1e-3).kind(), GateKind::General);
    SparseState s;
    const int q = s.add_register("q", 1);
    try {
        apply_unitary2(s, q, 0, Unitary2 { 1.0, 1.0, 0.0, 1.0 });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotUnitary);
    }
    EXPECT_TRUE((gate::u3(0.3, 1.1, -0.4) * gate::u3(0.3, 1.1, -0.4).adjoint()).is_unitary());
}

TEST(Unitary2, HadamardExamples)
{
    SparseState s;
    const int q = s.add_register("q", 2);
    apply_h(s, q, 0);
    ASSERT_EQ(s.size(), 2u);
    for (const auto& b : s.branches()) {
        EXPECT_NEAR(std::abs(b.amplitude - std::sqrt(0.5)), 0.0, 1e-15);
    }
    apply_h(s, q, 1);
    ASSERT_EQ(s.size(), 4u);
    for (const auto& b : s.branches()) {
        EXPECT_NEAR(std::abs(b.amplitude - 0.5), 0.0, 1e-15);
    }
    apply_h(s, q, 0);
    apply_h(s, q, 1);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(std::abs(s.branches()[0].amplitude - 1.0), 0.0, 1e-15);
}

TEST(Unitary2, DiagonalKeepsBranchCount)
{
    std::mt19937_64 rng(8);
    const Layout L({ 4, 3 });
    for (int t = 0; t < 20; ++t) {
        auto s = random_sparse(rng, L, 60);
        const auto before = s.size();
        apply_unitary2(s, 1, t % 3, gate::rz(0.1 * t + 0.2));
        EXPECT_EQ(s.size(), before);
    }
}

TEST(Unitary2, FastPathsMatchGeneralPath)
{
    std::mt19937_64 rng(12);
    const Layout L({ 3, 3 });
    const Unitary2 mats[] = { gate::rz(0.3), gate::x() * gate::rz(0.3), gate::y(), gate::s(), gate::x() };
    for (const auto& u : mats) {
        for (int t = 0; t < 10; ++t) {
            auto a = random_sparse(rng, L, 40);
            auto b = a;
            const ControlSpec c { { 0, 2, (t & 1) != 0 } };
            apply_unitary2(a, 1, t % 3, u, c);
            apply_unitary2(b, 1, t % 3, u, c, true);
            EXPECT_LE(oracle::max_abs_diff(dense_vector(a), dense_vector(b)), 1e-14);
            EXPECT_EQ(a.size(), b.size());
        }
    }
}

TEST(Unitary2, ControlledGroupingMixesOnlySatisfyingBranches)
{
    // (|00> + |11>)/sqrt2 on (ctrl, tgt); CH with ctrl=1 touches only |11>.
    SparseState s;
    const int c = s.add_register("c", 1);
    const int t = s.add_register("t", 1);
    apply_h(s, c, 0);
    apply_flip(s, t, 0, { { c, 0 } });
    apply_unitary2(s, t, 0, gate::h(), { { c, 0 } });
    const auto v = dense_vector(s);
    const double r = std::sqrt(0.5);
    EXPECT_NEAR(std::abs(v[0] - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[1] - r * r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[3] + r * r), 0.0, 1e-15);
    EXPECT_EQ(s.size(), 3u);
}

TEST(Unitary2, RegisterValuedMatrix)
{
    // Rotation angle read from another register: Ry(pi * a / 2) on t.
    SparseState s;
    const int a = s.add_register("a", 2);
    const int t = s.add_register("t", 1);
    apply_h(s, a, 0);
    apply_h(s, a, 1);
    apply_unitary2_with(s, t, 0, [a](const SparseState::Branch& b) {
        return gate::ry(std::numbers::pi * static_cast<double>(b.registers[a]) / 2);
    });
    oracle::DenseSim ref(3);
    ref.apply(0, oracle::mat::h());
    ref.apply(1, oracle::mat::h());
    for (unsigned v = 0; v < 4; ++v) {
        ref.apply(2, oracle::mat::ry(std::numbers::pi * v / 2), { { 0, (v & 1) != 0 }, { 1, (v & 2) != 0 } });
    }
    EXPECT_LE(oracle::max_abs_diff(dense_vector(s), ref.amplitudes()), 1e-15);
    s.check_invariants();
}

TEST(Arith, Examples)
{
    SparseState s;
    const int a = s.add_register("a", 4);
    const int b = s.add_register("b", 4);
    arith_add_const(s, a, 5);
    arith_add_const(s, a, 3);
    EXPECT_EQ(s.branches()[0].registers[a], 8u);
    arith_sub_const(s, a, 5);
    arith_add_const(s, b, 14);
    arith_add_reg(s, a, b);
    EXPECT_EQ(s.branches()[0].registers[a], 3u);
    EXPECT_EQ(s.branches()[0].registers[b], 1u);
    arith_xor_reg(s, a, b);
    EXPECT_EQ(s.branches()[0].registers[b], 2u);
    try {
        arith_add_reg(s, a, a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::AliasedRegisters);
    }
    try {
        arith_mul_const_odd(s, a, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EvenMultiplier);
    }
    EXPECT_THROW(arith_add_const(s, a, 1, { { a, 0 } }), Error);
}

TEST(Arith, OddMultiplierInverseOverFullDomain)
{
    EXPECT_EQ(inverse_mod_pow2(3, 4), 11u);
    for (std::uint64_t c = 1; c < 64; c += 2) {
        EXPECT_EQ((c * inverse_mod_pow2(c, 64)), 1u);
    }
    for (std::uint64_t v = 0; v < 16; ++v) {
        SparseState s;
        const int r = s.add_register("r", 4);
        arith_add_const(s, r, v);
        arith_mul_const_odd(s, r, 3);
        EXPECT_EQ(s.branches()[0].registers[r], (3 * v) % 16);
        arith_mul_const_odd(s, r, 11);
        EXPECT_EQ(s.branches()[0].registers[r], v);
    }
}

TEST(Measure, Examples)
{
    SparseState s;
    const int q = s.add_register("q", 1);
    apply_flip(s, q, 0);
    EXPECT_EQ(measure_register(s, q, std::uint64_t { 7 }), 1u);

    std::mt19937_64 rng(99);
    int ones = 0;
    const int shots = 100000;
    for (int i = 0; i < shots; ++i) {
        SparseState t;
        const int r = t.add_register("q", 1);
        apply_h(t, r, 0);
        ones += static_cast<int>(measure_register(t, r, rng));
        ASSERT_EQ(t.size(), 1u);
        ASSERT_NEAR(t.norm_squared(), 1.0, 1e-12);
    }
    EXPECT_NEAR(static_cast<double>(ones) / shots, 0.5, 0.01);

    SparseState u;
    const int r = u.add_register("q", 1);
    u.branches()[0].amplitude = 2.0;
    try {
        measure_register(u, r, std::uint64_t { 1 });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnnormalizedState);
    }
}

TEST(Measure, PartialCollapseRenormalizes)
{
    std::mt19937_64 rng(21);
    const Layout L({ 3, 2 });
    auto s = random_sparse(rng, L, 30);
    const auto dist = register_distribution(s, 0);
    const auto outcome = measure_register(s, 0, rng);
    EXPECT_GT(dist.at(outcome), 0.0);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    for (const auto& b : s.branches()) {
        EXPECT_EQ(b.registers[0], outcome);
    }
    const int bit = measure_bit(s, 1, 1, rng);
    for (const auto& b : s.branches()) {
        EXPECT_EQ(static_cast<int>((b.registers[1] >> 1) & 1), bit);
    }
}

TEST(Properties, NonInterferenceKeepsBranchCount)
{
    std::mt19937_64 rng(31);
    const std::vector<Op> ops = { Op::X, Op::Y, Op::Z, Op::S, Op::T, Op::Phase, Op::RotDiag, Op::RotAdiag,
        Op::AddConst, Op::AddReg, Op::XorReg, Op::MulOdd };
    for (int t = 0; t < 200; ++t) {
        const Layout L = random_layout(rng, 8);
        auto s = random_sparse(rng, L, 50);
        const auto before = s.size();
        apply_sparse(s, random_gate(rng, L, ops));
        EXPECT_EQ(s.size(), before);
        s.check_invariants(0.0);
    }
}

TEST(Properties, GateThenInverseRestoresState)
{
    std::mt19937_64 rng(77);
    const std::vector<Op> ops(std::begin(kAllOps), std::end(kAllOps));
    for (int t = 0; t < 500; ++t) {
        const Layout L = random_layout(rng, 1 + static_cast<unsigned>(rng() % 10));
        auto s = random_sparse(rng, L, 64);
        const auto before = dense_vector(s);
        const Gate g = random_gate(rng, L, ops);
        apply_sparse(s, g);
        apply_sparse(s, inverse_of(g));
        ASSERT_LE(oracle::max_abs_diff(dense_vector(s), before), 1e-12) << "op " << static_cast<int>(g.op);
    }
}

TEST(Properties, RandomCircuitsMatchDenseOracle)
{
    std::mt19937_64 rng(5150);
    const std::vector<Op> ops(std::begin(kAllOps), std::end(kAllOps));
    for (int c = 0; c < 10; ++c) {
        const Layout L = random_layout(rng, 4 + static_cast<unsigned>(rng() % 5));
        auto s = make_state(L);
        oracle::DenseSim ref(L.qubits);
        for (int k = 0; k < 200; ++k) {
            const Gate g = random_gate(rng, L, ops);
            apply_sparse(s, g);
            apply_dense(ref, L, g);
            s.check_invariants();
        }
        EXPECT_LE(oracle::max_abs_diff(dense_vector(s), ref.amplitudes()), 1e-10);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
    }
}

TEST(Properties, DenseExportInvariantUnderThreadCount)
{
    std::mt19937_64 rng(404);
    const std::vector<Op> ops(std::begin(kAllOps), std::end(kAllOps));
    const Layout L({ 4, 4, 4 });
    std::vector<Gate> circuit;
    for (int k = 0; k < 150; ++k) {
        circuit.push_back(random_gate(rng, L, ops));
    }
    std::vector<Amplitude> first;
    for (std::size_t p : { 1, 3, 8 }) {
        auto s = make_state(L, ExecConfig { p, 8, 16 });
        for (const auto& g : circuit) {
            apply_sparse(s, g);
        }
        if (first.empty()) {
            first = dense_vector(s);
        } else {
            EXPECT_LE(oracle::max_abs_diff(dense_vector(s), first), 1e-12);
        }
    }
}
