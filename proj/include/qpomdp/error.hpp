// Copyright 2026 The qpomdp Authors
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

namespace qpomdp {

enum class ErrorCode {
    CyclicGraph,
    CptShapeMismatch,
    CptNotNormalized,
    InvalidVariable,
    InvalidAssignment,
    JointTooLarge,
    ZeroEvidenceProbability,
    RejectionBudgetExceeded,
    NotNormalized,
    NonBinaryVariable,
    DimensionMismatch,
    InvalidProbability,
    UnknownAction,
    InvalidBelief,
    ImpossibleObservation,
    InvalidConfig,
    DegenerateSizes,
    UnattainableEpsilon,
    InvalidSigma,
    EmptyPhi,
    ParseError,
    IoError,
};

inline std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::CyclicGraph: return "CyclicGraph";
        case ErrorCode::CptShapeMismatch: return "CptShapeMismatch";
        case ErrorCode::CptNotNormalized: return "CptNotNormalized";
        case ErrorCode::InvalidVariable: return "InvalidVariable";
        case ErrorCode::InvalidAssignment: return "InvalidAssignment";
        case ErrorCode::JointTooLarge: return "JointTooLarge";
        case ErrorCode::ZeroEvidenceProbability: return "ZeroEvidenceProbability";
        case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NonBinaryVariable: return "NonBinaryVariable";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidProbability: return "InvalidProbability";
        case ErrorCode::UnknownAction: return "UnknownAction";
        case ErrorCode::InvalidBelief: return "InvalidBelief";
        case ErrorCode::ImpossibleObservation: return "ImpossibleObservation";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::DegenerateSizes: return "DegenerateSizes";
        case ErrorCode::UnattainableEpsilon: return "UnattainableEpsilon";
        case ErrorCode::InvalidSigma: return "InvalidSigma";
        case ErrorCode::EmptyPhi: return "EmptyPhi";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code), message_(message) {}

    ErrorCode code() const noexcept { return code_; }

    /// The message without the code prefix that what() carries.
    const std::string& message() const noexcept { return message_; }

   private:
    ErrorCode code_;
    std::string message_;
};

/// Parse failure with a 1-based line/column position.
class ParseError : public Error {
   public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

   private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace qpomdp
