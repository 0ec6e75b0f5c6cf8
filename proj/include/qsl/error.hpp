// Copyright 2026 The QSL Authors
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

namespace qsl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed file or text; message carries line/field context.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Request exceeds a configured resource cap (memory, enumeration size).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Construction parameters fall in a domain where a closed-form weight diverges.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsl
