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
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparq/error.hpp"
#include "sparq/qram/qram.hpp"

namespace sparq::qlss {

/// Rotation angles that prepare each column of a matrix by descending a
/// binary tree, most significant qubit first. At level l the rotation on bit
/// (depth-1-l) uses angles[l][prefix | (k << l)], where prefix holds the l
/// bits already fixed and k selects the column. Descending with Ry gives
/// magnitudes; signs[j | (k << depth)] flags negative entries.
struct AngleTree {
    unsigned depth = 0;
    unsigned index_bits = 0;
    std::vector<std::vector<double>> angles;
    std::vector<std::uint8_t> signs;

    bool has_negative() const
    {
        for (auto s : signs) {
            if (s != 0) {
                return true;
            }
        }
        return false;
    }
};

/// Trees for the columns of `columns` (N x K, both powers of two).
inline AngleTree build_tree(const Eigen::MatrixXd& columns)
{
    const std::size_t N = static_cast<std::size_t>(columns.rows());
    const std::size_t K = static_cast<std::size_t>(columns.cols());
    if (N == 0 || K == 0 || !std::has_single_bit(N) || !std::has_single_bit(K)) {
        throw Error(Errc::BadDimension, "tree input must be a power of two in each dimension");
    }
    AngleTree tree;
    tree.depth = static_cast<unsigned>(std::countr_zero(N));
    tree.index_bits = static_cast<unsigned>(std::countr_zero(K));
    tree.angles.resize(tree.depth);
    tree.signs.assign(N * K, 0);
    for (std::size_t k = 0; k < K; ++k) {
        // norms[l][p]: norm of the entries whose top l bits equal p.
        std::vector<std::vector<double>> norms(tree.depth + 1);
        norms[tree.depth].resize(N);
        for (std::size_t j = 0; j < N; ++j) {
            norms[tree.depth][j] = std::abs(columns(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
            tree.signs[j | (k << tree.depth)] = columns(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) < 0 ? 1 : 0;
        }
        for (unsigned l = tree.depth; l-- > 0;) {
            norms[l].resize(std::size_t { 1 } << l);
            for (std::size_t p = 0; p < norms[l].size(); ++p) {
                norms[l][p] = std::hypot(norms[l + 1][2 * p], norms[l + 1][2 * p + 1]);
            }
        }
        if (norms[0][0] == 0.0) {
            throw Error(Errc::ZeroColumn, "column " + std::to_string(k) + " is zero");
        }
        for (unsigned l = 0; l < tree.depth; ++l) {
            auto& level = tree.angles[l];
            level.resize(std::size_t { 1 } << (l + tree.index_bits));
            for (std::size_t p = 0; p < (std::size_t { 1 } << l); ++p) {
                level[p | (k << l)] = 2.0 * std::atan2(norms[l + 1][2 * p + 1], norms[l + 1][2 * p]);
            }
        }
    }
    return tree;
}

/// Column trees (one per column of A) and the tree of column norms.
struct AngleTrees {
    AngleTree columns;
    AngleTree norms;
    double frobenius = 0.0;
};

inline AngleTrees build_angle_trees(const Eigen::MatrixXd& A)
{
    AngleTrees t;
    t.columns = build_tree(A);
    Eigen::VectorXd col_norms(A.cols());
    for (Eigen::Index k = 0; k < A.cols(); ++k) {
        col_norms(k) = A.col(k).norm();
    }
    t.norms = build_tree(col_norms);
    t.frobenius = A.norm();
    return t;
}

/// QRAM tables for a tree: one per level (angle bit patterns in 64-bit
/// words) plus one for the leaf signs.
struct TreeMemories {
    unsigned depth = 0;
    unsigned index_bits = 0;
    std::vector<QramMemory> levels;
    QramMemory signs;
    bool has_negative = false;
};

inline TreeMemories tree_memories(const AngleTree& tree)
{
    TreeMemories m;
    m.depth = tree.depth;
    m.index_bits = tree.index_bits;
    for (unsigned l = 0; l < tree.depth; ++l) {
        std::vector<std::uint64_t> words;
        words.reserve(tree.angles[l].size());
        for (double a : tree.angles[l]) {
            words.push_back(std::bit_cast<std::uint64_t>(a));
        }
        m.levels.emplace_back(l + tree.index_bits, 64, std::move(words));
    }
    m.signs = QramMemory(tree.depth + tree.index_bits, 64, std::vector<std::uint64_t>(tree.signs.begin(), tree.signs.end()));
    m.has_negative = tree.has_negative();
    return m;
}

} // namespace sparq::qlss
