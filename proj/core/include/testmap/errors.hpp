// Copyright 2026 The testmap Authors
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

#ifndef TESTMAP_ERRORS_HPP_
#define TESTMAP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace testmap {

// Base type for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally invalid class file: bad magic, truncated data, dangling
// constant-pool indices, invalid descriptors, bad branch targets.
class MalformedClass : public Error {
 public:
  using Error::Error;
};

// Class-file major version above the configured cap.
class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

// An input path does not exist or cannot be read.
class IoError : public Error {
 public:
  using Error::Error;
};

// Knowledge-base config is not a parseable document.
class ConfigSyntax : public Error {
 public:
  ConfigSyntax(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Knowledge-base config parses but violates the schema (unknown category,
// empty pattern, bad classification name).
class ConfigSemantic : public Error {
 public:
  ConfigSemantic(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Parsed superclass edges form a cycle.
class CyclicHierarchy : public Error {
 public:
  using Error::Error;
};

// `diff` inputs were produced with different report schema versions.
class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

// Coverage XML is not parseable or misses required counters.
class MalformedCoverage : public Error {
 public:
  using Error::Error;
};

// Treemap canvas has zero area.
class DegenerateCanvas : public Error {
 public:
  using Error::Error;
};

}  // namespace testmap

#endif  // TESTMAP_ERRORS_HPP_
