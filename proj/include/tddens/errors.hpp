// Copyright 2026 The tddens Authors
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

namespace tddens {

/// Base of all library-specific failures. Precondition violations on
/// arguments (bad indices, mismatched dimensions) use std::invalid_argument /
/// std::out_of_range instead.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (model files, integral tables).
class ModelError : public Error {
   public:
    using Error::Error;
};

/// A numerical procedure could not produce a result.
class NumericalError : public Error {
   public:
    using Error::Error;
};

/// Harmonic inversion found no oscillating component at the density frequency.
class NoSignalError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// Every particle received zero likelihood.
class DegeneratePosteriorError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// Outlier cleaning removed every point of a trace.
class EmptyTraceError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

}  // namespace tddens
