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

#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "sparq/gates/gates.hpp"
#include "sparq/qram/qram.hpp"
#include "support/dense_oracle.hpp"

using namespace sparq;

namespace {

std::string write_temp(const std::string& name, const std::string& body)
{
    const auto path = std::filesystem::temp_directory_path() / ("sparq_" + name + ".json");
    std::ofstream(path) << body;
    return path.string();
}

Errc code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::InvalidArgument;
}

} // namespace

TEST(Qram, SingleAddressExample)
{
    SparseState s;
    const int a = s.add_register("addr", 1);
    const int d = s.add_register("data", 2);
    const QramMemory mem(1, 2, { 3, 1 });
    apply_flip(s, a, 0);
    qram_load(s, a, d, mem);
    EXPECT_EQ(s.branches()[0].registers[d], 1u);
}

TEST(Qram, SuperposedAddress)
{
    SparseState s;
    const int a = s.add_register("addr", 1);
    const int d = s.add_register("data", 2);
    const QramMemory mem(1, 2, { 3, 1 });
    apply_h(s, a, 0);
    qram_load(s, a, d, mem);
    // Branch-wise definition: |0>|0 xor 3> and |1>|0 xor 1>.
    const auto v = dense_vector(s);
    const double r = std::sqrt(0.5);
    EXPECT_NEAR(std::abs(v[0 | (3 << 1)] - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v[1 | (1 << 1)] - r), 0.0, 1e-15);
    EXPECT_EQ(s.size(), 2u);
}

TEST(Qram, InvolutionAndBranchCount)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        std::vector<std::uint64_t> entries(16);
        for (auto& e : entries) {
            e = rng() & 0x3f;
        }
        const QramMemory mem(4, 6, entries);
        SparseState s;
        const int a = s.add_register("a", 4);
        const int d = s.add_register("d", 6);
        apply_h(s, a, 0);
        apply_h(s, a, 2);
        apply_unitary2(s, d, 1, gate::ry(0.7));
        const auto before = dense_vector(s);
        const auto count = s.size();
        qram_load(s, a, d, mem);
        EXPECT_EQ(s.size(), count);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
        s.check_invariants();
        qram_load(s, a, d, mem);
        EXPECT_EQ(dense_vector(s), before);
    }
}

TEST(Qram, PermutationMatchesDefinition)
{
    // Columns of the induced map on every basis input vs |i>|j xor d_i>.
    std::mt19937_64 rng(17);
    for (unsigned n = 0; n <= 4; ++n) {
        const unsigned w = 3;
        std::vector<std::uint64_t> entries(std::size_t { 1 } << n);
        for (auto& e : entries) {
            e = rng() & 7;
        }
        const QramMemory mem(n, w, entries);
        for (std::uint64_t i = 0; i < entries.size(); ++i) {
            for (std::uint64_t j = 0; j < 8; ++j) {
                SparseState s;
                const int d = s.add_register("d", w);
                if (n == 0) {
                    arith_add_const(s, d, j);
                    qram_load(s, std::span<const AddressField> {}, d, mem);
                    EXPECT_EQ(s.branches()[0].registers[d], j ^ entries[0]);
                    continue;
                }
                const int a = s.add_register("a", n);
                arith_add_const(s, a, i);
                arith_add_const(s, d, j);
                qram_load(s, a, d, mem);
                EXPECT_EQ(s.branches()[0].registers[a], i);
                EXPECT_EQ(s.branches()[0].registers[d], j ^ entries[i]);
            }
        }
    }
}

TEST(Qram, CompositeAddressFields)
{
    // Address = (bits 1..2 of x) | (y << 2).
    SparseState s;
    const int x = s.add_register("x", 4);
    const int y = s.add_register("y", 1);
    const int d = s.add_register("d", 8);
    std::vector<std::uint64_t> entries(8);
    for (std::uint64_t k = 0; k < 8; ++k) {
        entries[k] = 10 + k;
    }
    const QramMemory mem(3, 8, entries);
    const AddressField fields[] = { { x, 1, 2 }, { y, 0, 1 } };
    arith_add_const(s, x, 0b1101);
    apply_flip(s, y, 0);
    qram_load(s, fields, d, mem);
    EXPECT_EQ(s.branches()[0].registers[d], 10u + (0b10 | 0b100));
}

TEST(Qram, WidthChecks)
{
    SparseState s;
    const int a = s.add_register("a", 2);
    const int d = s.add_register("d", 3);
    const QramMemory mem(1, 3, { 1, 2 });
    EXPECT_EQ(code_of([&] { qram_load(s, a, d, mem); }), Errc::WidthMismatch);
    const QramMemory mem2(2, 2, { 1, 2, 3, 0 });
    EXPECT_EQ(code_of([&] { qram_load(s, a, d, mem2); }), Errc::WidthMismatch);
    EXPECT_EQ(code_of([&] { qram_load(s, a, a, mem2); }), Errc::AliasedRegisters);
}

TEST(Qram, MemoryFile)
{
    const auto ok = load_memory_file(write_temp("ok", R"({"addr_width":1,"word_width":2,"entries":[3,1]})"));
    EXPECT_EQ(ok.size(), 2u);
    EXPECT_EQ(ok[0], 3u);
    EXPECT_EQ(code_of([] { load_memory_file(write_temp("len", R"({"addr_width":2,"word_width":2,"entries":[3,1]})")); }),
        Errc::ParseError);
    EXPECT_EQ(code_of([] { load_memory_file(write_temp("big", R"({"addr_width":1,"word_width":2,"entries":[5,1]})")); }),
        Errc::EntryOutOfRange);
    EXPECT_EQ(code_of([] { load_memory_file(write_temp("bad", R"({"addr_width":1,)")); }), Errc::ParseError);
    EXPECT_EQ(code_of([] { load_memory_file(write_temp("neg", R"({"addr_width":1,"word_width":2,"entries":[-1,1]})")); }),
        Errc::ParseError);
    EXPECT_EQ(code_of([] { load_memory_file("/nonexistent/mem.json"); }), Errc::ParseError);
    const auto round = QramMemory::from_json(ok.to_json());
    EXPECT_EQ(round.entries()[1], 1u);
}
