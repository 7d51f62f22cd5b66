// Copyright 2026 The hybridspin Authors
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

namespace hybridspin {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different Hilbert spaces.
class SpaceMismatchError : public Error {
 public:
  using Error::Error;
};

/// A factor has the wrong kind (e.g. a boson operator requested on a qubit).
class FactorKindError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Parametric drive at or beyond the instability threshold |Omega_p| >= Delta_m.
class UnstableDriveError : public Error {
 public:
  using Error::Error;
};

/// A Fock truncation is too small for the requested state or dynamics.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// The state left the physical set during integration.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The adaptive step size underflowed.
class StiffnessError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// Malformed or out-of-policy configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A gating oracle failed; figure output is refused.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace hybridspin
