// Copyright 2026 The qwave Authors
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

namespace qwave {

/// Broad failure classes. The CLI maps `validation` to exit code 1 and
/// everything else to exit code 2.
enum class ErrorKind {
    invalid_grid,
    positivity,
    dimension,
    reduction,
    incompatible_constraints,
    encoding,
    non_hermitian,
    invalid_schedule,
    causality,
    cfl,
    estimator,
    circuit,
    validation,
    io,
};

inline const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_grid: return "invalid-grid";
        case ErrorKind::positivity: return "positivity";
        case ErrorKind::dimension: return "dimension-mismatch";
        case ErrorKind::reduction: return "reduction";
        case ErrorKind::incompatible_constraints: return "incompatible-constraints";
        case ErrorKind::encoding: return "encoding";
        case ErrorKind::non_hermitian: return "non-hermitian";
        case ErrorKind::invalid_schedule: return "invalid-schedule";
        case ErrorKind::causality: return "causality";
        case ErrorKind::cfl: return "cfl";
        case ErrorKind::estimator: return "estimator";
        case ErrorKind::circuit: return "circuit";
        case ErrorKind::validation: return "validation";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string &message() const noexcept { return message_; }

   private:
    ErrorKind kind_;
    std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string &message) {
    if (!condition) {
        fail(kind, message);
    }
}

}  // namespace qwave
