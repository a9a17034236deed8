// Copyright 2026 The topotex Authors
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

namespace topotex {

/// Broad failure category. Maps onto CLI exit codes and C API status codes.
enum class ErrorKind {
  Domain,  // bad data: degenerate input, too-small annotation, bounds
  Io,      // unreadable / unwritable files, malformed file contents
  Usage,   // caller misuse: wrong dimensions, missing prerequisites
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

/// A crop rectangle falls outside the source image.
class BoundsError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An image is smaller than the requested patch size.
class TooSmallError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace topotex
