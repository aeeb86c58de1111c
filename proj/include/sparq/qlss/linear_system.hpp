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

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sparq/error.hpp"

namespace sparq::qlss {

enum class Variant { PositiveDefinite, NonHermitian };

inline std::string_view to_string(Variant v) { return v == Variant::PositiveDefinite ? "pd" : "nh"; }

inline Variant parse_variant(std::string_view s)
{
    if (s == "pd") {
        return Variant::PositiveDefinite;
    }
    if (s == "nh") {
        return Variant::NonHermitian;
    }
    throw Error(Errc::InvalidArgument, "variant must be 'pd' or 'nh', got '" + std::string(s) + "'");
}

struct LinearSystem {
    unsigned n = 0;
    std::size_t N = 0;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    double kappa = 1.0;
    Variant variant = Variant::PositiveDefinite;
};

/// N values spaced geometrically from 1/kappa up to 1.
inline std::vector<double> geometric_spectrum(std::size_t N, double kappa)
{
    std::vector<double> s(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double t = N == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(N - 1);
        s[i] = std::pow(kappa, t - 1.0);
    }
    return s;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
inline Eigen::MatrixXd random_orthogonal(std::size_t N, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(N, N);
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < N; ++i) {
            m(i, j) = g(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < N; ++j) {
        if (r(j, j) < 0) {
            q.col(j) = -q.col(j);
        }
    }
    return q;
}

/// PositiveDefinite: A = Q diag(s) Q^T. NonHermitian: A = U diag(s) V^T.
/// s is geometric on [1/kappa, 1]; b is the normalized all-ones vector.
inline LinearSystem gen_linear_system(unsigned n, double kappa, Variant variant, std::uint64_t seed)
{
    if (n < 2 || n > 4) {
        throw Error(Errc::BadDimension, "n must be 2, 3 or 4, got " + std::to_string(n));
    }
    if (!(kappa > 1.0)) {
        throw Error(Errc::InvalidArgument, "kappa must exceed 1");
    }
    LinearSystem sys;
    sys.n = n;
    sys.N = std::size_t { 1 } << n;
    sys.kappa = kappa;
    sys.variant = variant;
    std::mt19937_64 rng(seed);
    const auto s = geometric_spectrum(sys.N, kappa);
    Eigen::VectorXd sigma(sys.N);
    for (std::size_t i = 0; i < sys.N; ++i) {
        sigma(i) = s[i];
    }
    const Eigen::MatrixXd U = random_orthogonal(sys.N, rng);
    if (variant == Variant::PositiveDefinite) {
        sys.A = U * sigma.asDiagonal() * U.transpose();
        sys.A = 0.5 * (sys.A + sys.A.transpose());
    } else {
        const Eigen::MatrixXd V = random_orthogonal(sys.N, rng);
        sys.A = U * sigma.asDiagonal() * V.transpose();
    }
    sys.b = Eigen::VectorXd::Ones(sys.N) / std::sqrt(static_cast<double>(sys.N));
    return sys;
}

/// Normalized A^{-1} b by partial-pivot LU.
inline Eigen::VectorXd reference_solution(const LinearSystem& sys)
{
    Eigen::VectorXd x = sys.A.partialPivLu().solve(sys.b);
    return x / x.norm();
}

/// Ratio of extreme singular values.
inline double condition_number(const Eigen::MatrixXd& A)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    return s(0) / s(s.size() - 1);
}

} // namespace sparq::qlss
