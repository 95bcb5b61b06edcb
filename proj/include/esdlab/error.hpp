// Copyright 2026 The esdlab Authors
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

namespace esdlab {

enum class ErrorCode {
    NotHermitian,
    NotPositive,
    NegativeRate,
    NonPositiveLarmor,
    SecularPreconditionViolated,
    InvalidStep,
    InvariantViolated,
    ParameterOutOfRange,
    EmptyTrace,
    ConfigError,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::NonPositiveLarmor: return "NonPositiveLarmor";
    case ErrorCode::SecularPreconditionViolated: return "SecularPreconditionViolated";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library. `code()` is stable; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the integrators; carries the simulation time at which a
/// trace, Hermiticity or positivity check first failed.
class InvariantViolation : public Error {
public:
    InvariantViolation(double time, const std::string& what)
        : Error(ErrorCode::InvariantViolated, what + " at t=" + std::to_string(time)), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace esdlab
