// Copyright 2026 The qidt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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

namespace qidt {

enum class ErrorKind {
    NonHermitian,
    NonSquare,
    NotPositive,
    DimMismatch,
    NotOrthogonal,
    IndexOutOfRange,
    WeightError,
    BadPartition,
    NotIsometry,
    DivisionByZero,
    InternalError,
    EvenPrime,
    RangeError,
    CapExceeded,
    Validation,
    Parse,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonHermitian: return "NonHermitian";
        case ErrorKind::NonSquare: return "NonSquare";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::NotOrthogonal: return "NotOrthogonal";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::WeightError: return "WeightError";
        case ErrorKind::BadPartition: return "BadPartition";
        case ErrorKind::NotIsometry: return "NotIsometry";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::InternalError: return "InternalError";
        case ErrorKind::EvenPrime: return "EvenPrime";
        case ErrorKind::RangeError: return "RangeError";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::Validation: return "Validation";
        case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// the CLI can map it to an exit code and tests can match on it.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace qidt
