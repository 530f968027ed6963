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
//
// Stable, versioned report document: the only coupling between the
// analyze/map/explain/diff subcommands.

#ifndef TESTMAP_REPORT_HPP_
#define TESTMAP_REPORT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testmap/classify.hpp"
#include "testmap/pool.hpp"

namespace testmap {

struct TraceRecord {
  std::string category_key;
  std::optional<std::string> receiver_field;  // "owner.name" of the field
  struct Hop {
    MethodId method;
    uint32_t line = 0;
  };
  std::vector<Hop> chain;
};

struct ReportMethod {
  MethodId id;
  std::string classification;            // method_class_key
  std::string trivial_kind;              // set when trivial
  std::string excluded_reason;           // set when excluded
  std::vector<std::string> reasons;      // sorted reason keys
  uint32_t loc = 0;
  uint32_t complexity = 0;
  uint32_t line = 0;
  std::string module;
  std::string package;
  std::optional<TraceRecord> trace;
};

struct ReportInput {
  std::string path;
  std::string role;  // "application" | "dependency"
};

struct Report {
  int schema_version = 0;
  std::string tool_name;
  std::string tool_version;
  std::vector<ReportInput> inputs;
  std::string kb_fingerprint;
  std::vector<ReportMethod> methods;           // sorted by id
  std::vector<Segmentation> segmentations;     // repository, modules, packages
  std::vector<Diagnostic> diagnostics;
};

// Byte-deterministic serialization (sorted methods, fixed key order).
std::string report_to_json(const Report& report);

// Throws SchemaMismatch when the document's schema version is unsupported,
// Error when it is not a report at all.
Report report_from_json(const std::string& json_text);

Report load_report(const std::string& path);  // IoError on missing file
void write_report(const Report& report, const std::string& path);

struct BucketDelta {
  ScopeKind kind = ScopeKind::Repository;
  std::string id;
  int64_t trivial_loc = 0;
  int64_t testable_loc = 0;
  int64_t not_testable_loc = 0;
  int trivial_pct = 0;
  int testable_pct = 0;
  int not_testable_pct = 0;
};

struct MethodTransition {
  MethodId id;
  std::string before;  // classification + reasons, rendered
  std::string after;
};

struct DiffReport {
  std::vector<BucketDelta> deltas;            // scopes in canonical order
  std::vector<MethodTransition> transitions;  // classification changed
  std::vector<MethodId> added;                // only in `after`
  std::vector<MethodId> removed;              // only in `before`

  bool is_zero() const;
};

// Methods matched by MethodId; renamed/deleted ones are listed separately.
// Throws SchemaMismatch when schema versions differ.
DiffReport diff_reports(const Report& before, const Report& after);

std::string diff_to_json(const DiffReport& diff);

}  // namespace testmap

#endif  // TESTMAP_REPORT_HPP_
