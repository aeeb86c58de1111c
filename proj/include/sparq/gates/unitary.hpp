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
#include <complex>
#include <numbers>
#include <string>

#include "sparq/core/branch.hpp"
#include "sparq/error.hpp"

namespace sparq {

enum class GateKind { Diagonal, AntiDiagonal, General };

inline const char* to_string(GateKind kind)
{
    switch (kind) {
    case GateKind::Diagonal: return "Diagonal";
    case GateKind::AntiDiagonal: return "AntiDiagonal";
    case GateKind::General: return "General";
    }
    return "Unknown";
}

inline constexpr double kUnitaryTolerance = 1e-12;
inline constexpr double kStructuralZero = 1e-14;

/// Single-qubit gate in the computational basis: |0> -> u00|0> + u10|1>,
/// |1> -> u01|0> + u11|1>.
struct Unitary2 {
    Amplitude u00 { 1.0, 0.0 };
    Amplitude u01 { 0.0, 0.0 };
    Amplitude u10 { 0.0, 0.0 };
    Amplitude u11 { 1.0, 0.0 };

    GateKind kind() const
    {
        if (std::abs(u01) <= kStructuralZero && std::abs(u10) <= kStructuralZero) {
            return GateKind::Diagonal;
        }
        if (std::abs(u00) <= kStructuralZero && std::abs(u11) <= kStructuralZero) {
            return GateKind::AntiDiagonal;
        }
        return GateKind::General;
    }

    bool is_unitary(double tolerance = kUnitaryTolerance) const
    {
        // U^dagger U, element by element.
        const Amplitude d0 = std::norm(u00) + std::norm(u10);
        const Amplitude d1 = std::norm(u01) + std::norm(u11);
        const Amplitude off = std::conj(u00) * u01 + std::conj(u10) * u11;
        return std::abs(d0 - 1.0) <= tolerance && std::abs(d1 - 1.0) <= tolerance && std::abs(off) <= tolerance;
    }

    void validate() const
    {
        if (!is_unitary()) {
            throw Error(Errc::NotUnitary, "2x2 matrix is not unitary within 1e-12");
        }
    }

    Unitary2 adjoint() const { return { std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11) }; }

    /// Matrix product: (a * b) applies b first.
    friend Unitary2 operator*(const Unitary2& a, const Unitary2& b)
    {
        return {
            a.u00 * b.u00 + a.u01 * b.u10,
            a.u00 * b.u01 + a.u01 * b.u11,
            a.u10 * b.u00 + a.u11 * b.u10,
            a.u10 * b.u01 + a.u11 * b.u11,
        };
    }
};

namespace gate {

    inline Unitary2 identity() { return {}; }
    inline Unitary2 x() { return { 0.0, 1.0, 1.0, 0.0 }; }
    inline Unitary2 y() { return { 0.0, Amplitude(0.0, -1.0), Amplitude(0.0, 1.0), 0.0 }; }
    inline Unitary2 z() { return { 1.0, 0.0, 0.0, -1.0 }; }
    inline Unitary2 h()
    {
        const double r = 1.0 / std::numbers::sqrt2;
        return { r, r, r, -r };
    }
    inline Unitary2 s() { return { 1.0, 0.0, 0.0, Amplitude(0.0, 1.0) }; }
    inline Unitary2 sdg() { return { 1.0, 0.0, 0.0, Amplitude(0.0, -1.0) }; }
    inline Unitary2 t() { return { 1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4) }; }
    inline Unitary2 tdg() { return { 1.0, 0.0, 0.0, std::polar(1.0, -std::numbers::pi / 4) }; }

    inline Unitary2 rx(double theta)
    {
        const double c = std::cos(theta / 2);
        const double s = std::sin(theta / 2);
        return { c, Amplitude(0.0, -s), Amplitude(0.0, -s), c };
    }

    inline Unitary2 ry(double theta)
    {
        const double c = std::cos(theta / 2);
        const double s = std::sin(theta / 2);
        return { c, -s, s, c };
    }

    inline Unitary2 rz(double theta)
    {
        return { std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2) };
    }

    /// diag(1, e^{i lambda}); OpenQASM u1.
    inline Unitary2 phase(double lambda) { return { 1.0, 0.0, 0.0, std::polar(1.0, lambda) }; }

    /// OpenQASM 2.0 U(theta, phi, lambda).
    inline Unitary2 u3(double theta, double phi, double lambda)
    {
        const double c = std::cos(theta / 2);
        const double s = std::sin(theta / 2);
        return {
            c,
            -std::polar(s, lambda),
            std::polar(s, phi),
            std::polar(c, phi + lambda),
        };
    }

} // namespace gate

} // namespace sparq
