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

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparq {

enum class Errc {
    DuplicateName,
    WidthOutOfRange,
    TooManyRegisters,
    NotActive,
    NonZeroContent,
    TooManyQubits,
    InvalidTarget,
    NonUnitPhase,
    NotUnitary,
    EvenMultiplier,
    AliasedRegisters,
    UnnormalizedState,
    WidthMismatch,
    ParseError,
    EntryOutOfRange,
    SyntaxError,
    UnsupportedGate,
    UndeclaredRegister,
    BadDimension,
    ZeroColumn,
    TargetNotZero,
    AncillaNotZero,
    ZeroProjection,
    TimingTooNoisy,
    InvalidArgument,
};

inline std::string_view to_string(Errc code)
{
    switch (code) {
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::WidthOutOfRange: return "WidthOutOfRange";
    case Errc::TooManyRegisters: return "TooManyRegisters";
    case Errc::NotActive: return "NotActive";
    case Errc::NonZeroContent: return "NonZeroContent";
    case Errc::TooManyQubits: return "TooManyQubits";
    case Errc::InvalidTarget: return "InvalidTarget";
    case Errc::NonUnitPhase: return "NonUnitPhase";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::EvenMultiplier: return "EvenMultiplier";
    case Errc::AliasedRegisters: return "AliasedRegisters";
    case Errc::UnnormalizedState: return "UnnormalizedState";
    case Errc::WidthMismatch: return "WidthMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::EntryOutOfRange: return "EntryOutOfRange";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnsupportedGate: return "UnsupportedGate";
    case Errc::UndeclaredRegister: return "UndeclaredRegister";
    case Errc::BadDimension: return "BadDimension";
    case Errc::ZeroColumn: return "ZeroColumn";
    case Errc::TargetNotZero: return "TargetNotZero";
    case Errc::AncillaNotZero: return "AncillaNotZero";
    case Errc::ZeroProjection: return "ZeroProjection";
    case Errc::TimingTooNoisy: return "TimingTooNoisy";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the `Errc` codes so
/// callers (and the CLI exit-code mapping) can branch on the kind.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace sparq
