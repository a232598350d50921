// Copyright 2026 The qknit Authors
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

#ifndef QKNIT_ERRORS_HPP
#define QKNIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qknit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size limit (dimension, term count, rank) was exceeded.
class SizeCap : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions are inconsistent.
class DimMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotInvertible : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonUnitarySchmidtForm : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A quasiprobability decomposition with zero 1-norm cannot be sampled.
class DegenerateQpd : public DomainError {
 public:
  using DomainError::DomainError;
};

class SolverStall : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qknit

#endif  // QKNIT_ERRORS_HPP
