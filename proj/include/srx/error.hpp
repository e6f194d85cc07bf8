// Copyright 2026 The srx Authors
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

namespace srx {

// Common base so callers can catch everything from this library at once.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments, shape mismatches, out-of-range indices.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// An enumeration or search budget would be exceeded. The message names the
// offending budget so the CLI can surface it.
class GuardError : public Error {
 public:
  explicit GuardError(const std::string& what) : Error(what) {}
};

// A randomized search exhausted its trial budget. Carries the best error
// seen so the caller can report how close the search came.
class SearchError : public Error {
 public:
  SearchError(const std::string& what, double best_found)
      : Error(what), best_found_(best_found) {}
  double best_found() const { return best_found_; }

 private:
  double best_found_;
};

// Strict-mode parameter validation failed. Carries the rendered report.
class ConstraintError : public Error {
 public:
  ConstraintError(const std::string& what, std::string report)
      : Error(what), report_(std::move(report)) {}
  const std::string& report() const { return report_; }

 private:
  std::string report_;
};

// File or config syntax problems; message includes the line number.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace srx
