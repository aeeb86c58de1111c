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
#include <complex>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "sparq/qlss/walk.hpp"

using namespace sparq;
using namespace sparq::qlss;

namespace {

using cplx = std::complex<double>;
using Circuit = QlssCircuit<8>;
using State = Circuit::State;

Errc code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::InvalidArgument;
}

LinearSystem manual_system(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Variant v = Variant::PositiveDefinite)
{
    LinearSystem s;
    s.N = static_cast<std::size_t>(A.rows());
    s.n = static_cast<unsigned>(std::countr_zero(s.N));
    s.A = A;
    s.b = b;
    s.kappa = condition_number(A);
    s.variant = v;
    return s;
}

// Amplitude on the target register for branches whose other registers are 0.
Eigen::VectorXcd target_amplitudes(const Circuit& c, const State& s)
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(c.system().N));
    for (const auto& b : s.branches()) {
        bool rest_zero = true;
        for (std::size_t r = 0; r < 8; ++r) {
            if (static_cast<int>(r) != c.layout().target && b.registers[r] != 0) {
                rest_zero = false;
            }
        }
        if (rest_zero) {
            v(static_cast<Eigen::Index>(b.registers[c.layout().target])) += b.amplitude;
        }
    }
    return v;
}

// Prepares column k's tree on the target register of a fresh state.
Eigen::VectorXcd prepared(const Eigen::VectorXd& col)
{
    Circuit c(manual_system(Eigen::MatrixXd::Identity(col.size(), col.size()), col));
    State s = c.make_state(ExecConfig {});
    state_prep_Ub(c, s);
    return target_amplitudes(c, s);
}

// <i, 0, 0| U_A |j, 0, 0> for all i, j.
Eigen::MatrixXcd extract_UA(const Circuit& c)
{
    const std::size_t N = c.system().N;
    Eigen::MatrixXcd M(N, N);
    for (std::size_t j = 0; j < N; ++j) {
        State s = c.make_state(ExecConfig {});
        arith_add_const(s, c.layout().target, j);
        block_encode_A(c, s);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
        M.col(static_cast<Eigen::Index>(j)) = target_amplitudes(c, s);
    }
    return M;
}

Eigen::MatrixXcd extract_UH(const Circuit& c, double f, double& alpha)
{
    const std::size_t N = c.system().N;
    const std::size_t S = c.non_hermitian() ? 2 * N : N;
    const auto& L = c.layout();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * S, 2 * S);
    for (std::size_t col = 0; col < 2 * S; ++col) {
        State s = c.make_state(ExecConfig {});
        const std::size_t h = col / S;
        const std::size_t sys = col % S;
        arith_add_const(s, L.target, sys % N);
        if (sys >= N) {
            apply_flip(s, L.a1, 0);
        }
        if (h) {
            apply_flip(s, L.h, 0);
        }
        alpha = block_encode_Hs(c, s, f);
        for (const auto& b : s.branches()) {
            if (b.registers[L.c] || b.registers[L.flag] || b.registers[L.anc] || b.registers[L.qram]) {
                continue;
            }
            std::size_t row = b.registers[L.target] + b.registers[L.h] * S;
            if (c.non_hermitian()) {
                row += b.registers[L.a1] * N;
            }
            M(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += b.amplitude;
        }
    }
    return M;
}

// Classical assembly of [[0, A(f) Q_b], [Q_b A(f), 0]].
Eigen::MatrixXd assemble_H(const LinearSystem& sys, double f)
{
    const auto N = static_cast<Eigen::Index>(sys.N);
    Eigen::MatrixXd H0, H1;
    Eigen::VectorXd b;
    if (sys.variant == Variant::PositiveDefinite) {
        H0 = Eigen::MatrixXd::Identity(N, N);
        H1 = sys.A;
        b = sys.b;
    } else {
        H0 = Eigen::MatrixXd::Zero(2 * N, 2 * N);
        H0.topLeftCorner(N, N).setIdentity();
        H0.bottomRightCorner(N, N) = -Eigen::MatrixXd::Identity(N, N);
        H1 = Eigen::MatrixXd::Zero(2 * N, 2 * N);
        H1.topRightCorner(N, N) = sys.A;
        H1.bottomLeftCorner(N, N) = sys.A.transpose();
        b = Eigen::VectorXd::Zero(2 * N);
        b.head(N) = sys.b;
    }
    const Eigen::Index S = H0.rows();
    const Eigen::MatrixXd Af = (1.0 - f) * H0 + f * H1;
    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(S, S) - b * b.transpose();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * S, 2 * S);
    H.topRightCorner(S, S) = Af * Q;
    H.bottomLeftCorner(S, S) = Q * Af;
    return H;
}

} // namespace

TEST(QlssSystem, ConditionNumberAndSymmetry)
{
    for (unsigned n = 2; n <= 4; ++n) {
        for (double kappa : { 10.0, 30.0, 50.0 }) {
            const auto pd = gen_linear_system(n, kappa, Variant::PositiveDefinite, 11 * n);
            EXPECT_NEAR(condition_number(pd.A), kappa, 0.01 * kappa);
            EXPECT_LE((pd.A - pd.A.transpose()).cwiseAbs().maxCoeff(), 1e-12);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pd.A);
            EXPECT_GE(es.eigenvalues().minCoeff(), 1.0 / kappa - 1e-12);
            EXPECT_LE(es.eigenvalues().maxCoeff(), 1.0 + 1e-12);
            const auto nh = gen_linear_system(n, kappa, Variant::NonHermitian, 11 * n);
            EXPECT_NEAR(condition_number(nh.A), kappa, 0.01 * kappa);
            EXPECT_NEAR(nh.b.norm(), 1.0, 1e-15);
        }
    }
    const auto s = geometric_spectrum(2, 10.0);
    EXPECT_DOUBLE_EQ(s[0], 0.1);
    EXPECT_DOUBLE_EQ(s[1], 1.0);
}

TEST(QlssSystem, Errors)
{
    EXPECT_EQ(code_of([] { gen_linear_system(1, 10, Variant::PositiveDefinite, 1); }), Errc::BadDimension);
    EXPECT_EQ(code_of([] { gen_linear_system(5, 10, Variant::PositiveDefinite, 1); }), Errc::BadDimension);
    EXPECT_EQ(code_of([] { gen_linear_system(2, 1.0, Variant::PositiveDefinite, 1); }), Errc::InvalidArgument);
    EXPECT_EQ(code_of([] { parse_variant("herm"); }), Errc::InvalidArgument);
    EXPECT_EQ(parse_variant("nh"), Variant::NonHermitian);
}

TEST(QlssTrees, IdentityRoot)
{
    const auto t = build_angle_trees(Eigen::MatrixXd::Identity(2, 2));
    ASSERT_EQ(t.norms.depth, 1u);
    EXPECT_NEAR(t.norms.angles[0][0], M_PI / 2, 1e-15);
    EXPECT_NEAR(t.frobenius, std::sqrt(2.0), 1e-15);
}

TEST(QlssTrees, ZeroColumn)
{
    Eigen::MatrixXd A(2, 2);
    A << 1, 0, 2, 0;
    EXPECT_EQ(code_of([&] { build_angle_trees(A); }), Errc::ZeroColumn);
}

TEST(QlssTrees, SignedColumn)
{
    Eigen::VectorXd v(2);
    v << 0.6, -0.8;
    const auto got = prepared(v);
    EXPECT_LE((got - v.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(QlssStatePrep, Examples)
{
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(4);
    e0(0) = 1;
    const auto a = prepared(e0);
    EXPECT_LE((a - e0.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-15);

    const Eigen::VectorXd u = Eigen::VectorXd::Constant(4, 0.5);
    Circuit c(manual_system(Eigen::MatrixXd::Identity(4, 4), u));
    State s = c.make_state(ExecConfig {});
    state_prep_Ub(c, s);
    EXPECT_EQ(s.size(), 4u);
    for (const auto& b : s.branches()) {
        EXPECT_NEAR(std::abs(b.amplitude - cplx(0.5)), 0.0, 1e-15);
    }
}

TEST(QlssStatePrep, RandomVectorsAndInverse)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd v(8);
        for (auto& x : v) {
            x = g(rng);
        }
        v.normalize();
        EXPECT_LE((prepared(v) - v.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-12);

        Circuit c(manual_system(Eigen::MatrixXd::Identity(8, 8), v));
        State s = c.make_state(ExecConfig {});
        c.apply_Ub(s, {}, false);
        c.apply_Ub(s, {}, true);
        ASSERT_EQ(s.size(), 1u);
        EXPECT_NEAR(std::abs(s.branches()[0].amplitude - cplx(1.0)), 0.0, 1e-12);
    }
}

TEST(QlssStatePrep, TargetNotZero)
{
    Circuit c(manual_system(Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Constant(4, 0.5)));
    State s = c.make_state(ExecConfig {});
    apply_flip(s, c.layout().target, 1);
    EXPECT_EQ(code_of([&] { state_prep_Ub(c, s); }), Errc::TargetNotZero);
}

TEST(QlssBlockEncoding, Identity)
{
    Circuit c(manual_system(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Constant(2, std::sqrt(0.5))));
    const auto M = extract_UA(c);
    const Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(2, 2) / std::sqrt(2.0);
    EXPECT_LE((M - expect.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(QlssBlockEncoding, GeneratedMatrices)
{
    for (unsigned n = 2; n <= 4; ++n) {
        for (auto v : { Variant::PositiveDefinite, Variant::NonHermitian }) {
            const auto sys = gen_linear_system(n, 30.0, v, 100 + n);
            Circuit c(sys);
            const auto M = extract_UA(c);
            const Eigen::MatrixXd expect = sys.A / sys.A.norm();
            EXPECT_LE((M - expect.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-10) << "n=" << n << " " << to_string(v);
        }
    }
}

TEST(QlssBlockEncoding, AdjointUndoes)
{
    const auto sys = gen_linear_system(3, 10.0, Variant::NonHermitian, 8);
    Circuit c(sys);
    State s = c.make_state(ExecConfig {});
    apply_h(s, c.layout().target, 0);
    apply_h(s, c.layout().target, 2);
    const auto before = s.branches();
    block_encode_A(c, s);
    EXPECT_GT(s.size(), before.size());
    c.apply_UA(s, {}, true);
    ASSERT_EQ(s.size(), before.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        EXPECT_EQ(s.branches()[i].registers, before[i].registers);
        EXPECT_NEAR(std::abs(s.branches()[i].amplitude - before[i].amplitude), 0.0, 1e-12);
    }
}

TEST(QlssBlockEncoding, AncillaNotZero)
{
    Circuit c(gen_linear_system(2, 10.0, Variant::PositiveDefinite, 1));
    State s = c.make_state(ExecConfig {});
    apply_flip(s, c.layout().anc, 0);
    EXPECT_EQ(code_of([&] { block_encode_A(c, s); }), Errc::AncillaNotZero);
}

TEST(QlssHamiltonian, MatchesClassicalAssembly)
{
    for (auto v : { Variant::PositiveDefinite, Variant::NonHermitian }) {
        const auto sys = gen_linear_system(2, 10.0, v, 21);
        Circuit c(sys);
        for (double f : { 0.0, 0.5, 0.83, 1.0 }) {
            double alpha = 0;
            const auto M = extract_UH(c, f, alpha);
            const Eigen::MatrixXd H = assemble_H(sys, f);
            EXPECT_NEAR(alpha, std::sqrt(2.0) * std::hypot(1.0 - f, f * sys.A.norm()), 1e-14);
            EXPECT_LE((M - (H / alpha).cast<cplx>()).cwiseAbs().maxCoeff(), 1e-10) << to_string(v) << " f=" << f;
        }
    }
}

TEST(QlssHamiltonian, IdentityAtOne)
{
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(4, 0.5);
    const auto sys = manual_system(Eigen::MatrixXd::Identity(4, 4), b);
    Circuit c(sys);
    double alpha = 0;
    const auto M = extract_UH(c, 1.0, alpha);
    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(4, 4) - b * b.transpose();
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(8, 8);
    expect.topRightCorner(4, 4) = Q;
    expect.bottomLeftCorner(4, 4) = Q;
    EXPECT_LE((M - (expect / alpha).cast<cplx>()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(QlssHamiltonian, GroundStateAtZero)
{
    for (auto v : { Variant::PositiveDefinite, Variant::NonHermitian }) {
        Circuit c(gen_linear_system(3, 10.0, v, 4));
        State s = c.initial_state(ExecConfig {});
        block_encode_Hs(c, s, 0.0);
        // H(0)|psi0> = 0: nothing left in the ancilla-zero block.
        EXPECT_LE(c.project(s).norm(), 1e-12);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    }
    Circuit c(gen_linear_system(2, 10.0, Variant::PositiveDefinite, 4));
    State s = c.make_state(ExecConfig {});
    EXPECT_EQ(code_of([&] { block_encode_Hs(c, s, 1.5); }), Errc::InvalidArgument);
}

TEST(QlssReflection, Examples)
{
    Circuit c(gen_linear_system(2, 10.0, Variant::PositiveDefinite, 2));
    State s = c.make_state(ExecConfig {});
    reflection_R(c, s);
    EXPECT_NEAR(std::abs(s.branches()[0].amplitude - cplx(0, 1)), 0.0, 1e-15);

    std::mt19937_64 rng(9);
    for (const int reg : { c.layout().h, c.layout().c, c.layout().flag, c.layout().target, c.layout().anc }) {
        apply_unitary2(s, reg, 0, gate::u3(0.3 + reg, 0.2 * reg, 1.1));
    }
    const auto before = s.branches();
    reflection_R(c, s);
    const auto& L = c.layout();
    for (std::size_t i = 0; i < before.size(); ++i) {
        const auto& r = before[i].registers;
        const bool zero = r[L.c] == 0 && r[L.flag] == 0 && r[L.anc] == 0 && r[L.qram] == 0;
        const cplx expect = before[i].amplitude * (zero ? cplx(0, 1) : cplx(0, -1));
        EXPECT_NEAR(std::abs(s.branches()[i].amplitude - expect), 0.0, 1e-15);
    }
    reflection_R(c, s);
    // R^2 = -I.
    for (std::size_t i = 0; i < before.size(); ++i) {
        EXPECT_NEAR(std::abs(s.branches()[i].amplitude + before[i].amplitude), 0.0, 1e-15);
    }
}

TEST(QlssWalk, ZeroEigenvectorReturnsAfterTwoSteps)
{
    for (auto v : { Variant::PositiveDefinite, Variant::NonHermitian }) {
        Circuit c(gen_linear_system(2, 10.0, v, 3));
        const Eigen::VectorXcd psi0 = c.project(c.initial_state(ExecConfig {}));
        WalkConfig cfg;
        cfg.schedule = [](double) { return 0.0; };
        cfg.T = 1;
        // One step leaves the ancilla-zero block entirely.
        auto one = run_adiabatic(c, cfg, ExecConfig {});
        EXPECT_LE(c.project(one).norm(), 1e-12);
        EXPECT_EQ(code_of([&] { error_metric(c, one); }), Errc::ZeroProjection);
        cfg.T = 2;
        auto two = run_adiabatic(c, cfg, ExecConfig {});
        EXPECT_NEAR(std::abs(psi0.dot(c.project(two))), 1.0, 1e-10);
    }
}

TEST(QlssWalk, IdentitySystemIsExact)
{
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(2, std::sqrt(0.5));
    Circuit c(manual_system(Eigen::MatrixXd::Identity(2, 2), b));
    WalkConfig cfg;
    cfg.T = 4;
    cfg.schedule = [](double s) { return s; };
    const auto s = run_adiabatic(c, cfg, ExecConfig {});
    EXPECT_LE(error_metric(c, s), 1e-8);
}

TEST(QlssWalk, NormPreservedAndErrorDropsWithT)
{
    const auto sys = gen_linear_system(2, 10.0, Variant::PositiveDefinite, 1);
    Circuit c(sys);
    WalkConfig cfg;
    cfg.T = 100;
    const auto s100 = run_adiabatic(c, cfg, ExecConfig {});
    EXPECT_NEAR(s100.norm_squared(), 1.0, 1e-10);
    cfg.T = 1000;
    const auto s1000 = run_adiabatic(c, cfg, ExecConfig {});
    EXPECT_NEAR(s1000.norm_squared(), 1.0, 1e-9);
    const double e100 = error_metric(c, s100);
    const double e1000 = error_metric(c, s1000);
    EXPECT_LT(e1000, e100);
    EXPECT_GE(e100, 0.0);
    EXPECT_LE(e100, 2.0);
}

TEST(QlssWalk, MatchesDenseWalk)
{
    // Walk operator as a dense matrix, column by column from basis inputs.
    // Checks unitarity per step and that the sparse run agrees with plain
    // matrix iteration (no pruning drift, no ordering bugs).
    for (auto v : { Variant::PositiveDefinite, Variant::NonHermitian }) {
        const auto sys = gen_linear_system(2, 10.0, v, 13);
        Circuit c(sys);
        const std::size_t T = 20;
        WalkConfig cfg;
        cfg.T = T;
        const auto s = run_adiabatic(c, cfg, ExecConfig {});
        const std::size_t N = sys.N;
        const std::size_t S = c.non_hermitian() ? 2 * N : N;
        // Full dense space: h, c, flag, system, anc (qram always returns to 0).
        const std::size_t dim = 8 * S * N;
        auto idx = [&](std::size_t h, std::size_t cc, std::size_t fl, std::size_t sy, std::size_t a) {
            return (((h * 2 + cc) * 2 + fl) * S + sy) * N + a;
        };
        auto to_dense = [&](const State& st) {
            Eigen::VectorXcd d = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
            const auto& L = c.layout();
            for (const auto& b : st.branches()) {
                EXPECT_EQ(b.registers[L.qram], 0u);
                std::size_t sy = b.registers[L.target] + (c.non_hermitian() ? b.registers[L.a1] * N : 0);
                d(static_cast<Eigen::Index>(idx(b.registers[L.h], b.registers[L.c], b.registers[L.flag], sy,
                    b.registers[L.anc]))) += b.amplitude;
            }
            return d;
        };
        auto dense_step_matrix = [&](double f) {
            Eigen::MatrixXcd U(dim, dim);
            const auto& L = c.layout();
            for (std::size_t h = 0; h < 2; ++h)
                for (std::size_t cc = 0; cc < 2; ++cc)
                    for (std::size_t fl = 0; fl < 2; ++fl)
                        for (std::size_t sy = 0; sy < S; ++sy)
                            for (std::size_t a = 0; a < N; ++a) {
                                State b = c.make_state(ExecConfig {});
                                if (h) apply_flip(b, L.h, 0);
                                if (cc) apply_flip(b, L.c, 0);
                                if (fl) apply_flip(b, L.flag, 0);
                                if (sy >= N) apply_flip(b, L.a1, 0);
                                arith_add_const(b, L.target, sy % N);
                                arith_add_const(b, L.anc, a);
                                c.walk_step(b, f);
                                U.col(static_cast<Eigen::Index>(idx(h, cc, fl, sy, a))) = to_dense(b);
                            }
            return U;
        };
        Eigen::VectorXcd d = to_dense(c.initial_state(ExecConfig {}));
        for (std::size_t k = 0; k < T; ++k) {
            const double f = rational_schedule(static_cast<double>(k) / T, sys.kappa);
            const Eigen::MatrixXcd U = dense_step_matrix(f);
            EXPECT_LE((U.adjoint() * U - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10);
            d = U * d;
        }
        EXPECT_LE((to_dense(s) - d).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(QlssError, Trivial)
{
    const auto sys = gen_linear_system(2, 10.0, Variant::PositiveDefinite, 1);
    Circuit c(sys);
    const Eigen::VectorXd x = reference_solution(sys);
    // Projection equal to x (up to phase), then one orthogonal to x.
    State s = c.make_state(ExecConfig {});
    {
        std::vector<State::Branch> bs;
        for (std::size_t i = 0; i < sys.N; ++i) {
            State::Branch b;
            b.amplitude = x(static_cast<Eigen::Index>(i)) * cplx(0, 1);
            b.registers[c.layout().target] = i;
            b.rehash();
            bs.push_back(b);
        }
        s.assign(bs);
    }
    EXPECT_NEAR(error_metric(c, s), 0.0, 1e-7);
    Eigen::VectorXd z = Eigen::VectorXd::Random(4);
    z -= x.dot(z) * x;
    z.normalize();
    {
        std::vector<State::Branch> bs;
        for (std::size_t i = 0; i < 4; ++i) {
            State::Branch b;
            b.amplitude = z(static_cast<Eigen::Index>(i));
            b.registers[c.layout().target] = i;
            b.rehash();
            bs.push_back(b);
        }
        s.assign(bs);
    }
    EXPECT_NEAR(error_metric(c, s), std::sqrt(2.0), 1e-12);
}
