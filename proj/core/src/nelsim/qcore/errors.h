// Copyright 2026 The nelsim Authors
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

#ifndef NELSIM_QCORE_ERRORS_H
#define NELSIM_QCORE_ERRORS_H

#include <stdexcept>
#include <string>

namespace nelsim {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition or type invariant.
struct ValidationError : Error {
    using Error::Error;
};

/// A POVM element or state had a negative eigenvalue.
struct NotPsdError : ValidationError {
    double eigenvalue;
    NotPsdError(const std::string &what, double eigenvalue) : ValidationError(what), eigenvalue(eigenvalue) {
    }
};

/// The partial transpose of the state has no negative eigenvalue.
struct NotEntangledOrPptError : Error {
    double min_eigenvalue;
    NotEntangledOrPptError(const std::string &what, double min_eigenvalue)
        : Error(what), min_eigenvalue(min_eigenvalue) {
    }
};

/// A postselection targeted a branch of (numerically) zero amplitude.
struct ZeroBranchError : Error {
    using Error::Error;
};

/// Inputs fell inside a band where a comparison or estimate is not guaranteed.
struct UndeterminedError : Error {
    using Error::Error;
};

/// A decision oracle gave answers that no threshold value is consistent with.
struct OracleViolationError : Error {
    using Error::Error;
};

/// An image value has no preimage under the selected function.
struct NoPreimageError : Error {
    using Error::Error;
};

/// A requested precision does not fit in the selected numeric backend.
struct PrecisionBudgetError : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace nelsim

#endif
