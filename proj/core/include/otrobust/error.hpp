// Copyright 2026 The otrobust Authors.
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

#ifndef OTROBUST_ERROR_HPP_
#define OTROBUST_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace otrobust {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, malformed files, unsupported options.  CLI exit code 2.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Problem too large for the configured memory budget.
class SizeError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Anything that goes wrong inside a numerical routine.  CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SynthesisError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PropagationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateProposal : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace otrobust

#endif  // OTROBUST_ERROR_HPP_
