// Copyright 2026 the specden authors
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

namespace specden {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad sizes, bad ranges, ...).
class contract_error : public error {
 public:
  using error::error;
};

/// A value outside the model's domain reached a computation (e.g. a negative
/// decoherence exponent, which would imply an outcome probability above 1).
class domain_error : public error {
 public:
  using error::error;
};

/// A numerical procedure (factorization, sampling) failed beyond recovery.
class numeric_error : public error {
 public:
  using error::error;
};

/// Sequential inference degenerated (e.g. every particle weight underflowed).
class inference_error : public error {
 public:
  using error::error;
};

/// File or serialization failure.
class io_error : public error {
 public:
  using error::error;
};

/// Throws contract_error with `what` unless `condition` holds.
inline void require(bool condition, const std::string& what) {
  if (!condition) {
    throw contract_error(what);
  }
}

}  // namespace specden
