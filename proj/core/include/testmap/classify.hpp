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
// Per-method classification and per-scope segmentation.

#ifndef TESTMAP_CLASSIFY_HPP_
#define TESTMAP_CLASSIFY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "testmap/knowledge.hpp"
#include "testmap/metrics.hpp"

namespace testmap {

enum class MethodClass { Excluded, Trivial, Testable, NotTestable };

const char* method_class_key(MethodClass c);

// A reason a method is not unit-testable: a mockability category or the
// dedicated observability marker.
struct Reason {
  bool observability = false;
  Category category = Category::OtherNonDeterminism;

  auto operator<=>(const Reason&) const = default;

  static Reason of(Category c) { return {false, c}; }
  static Reason observability_reason() { return {true, {}}; }

  std::string key() const;
};

struct MethodClassification {
  MethodClass cls = MethodClass::Testable;
  TrivialKind trivial_kind = TrivialKind::None;  // Trivial
  std::string excluded_reason;                   // Excluded
  std::set<Reason> reasons;                      // NotTestable, nonempty
};

// Precedence: Excluded (no body / synthetic / bridge), then Trivial, then
// NotTestable (non-mockable category and/or observability), then Testable.
MethodClassification classify_method(const MethodModel& m, bool non_mockable,
                                     std::optional<Category> mock_category,
                                     bool non_observable);

struct BucketStat {
  uint64_t loc = 0;
  int pct = 0;  // largest-remainder rounded; buckets sum to 100
};

enum class ScopeKind { Repository, Module, Package };

const char* scope_kind_key(ScopeKind k);

struct Segmentation {
  ScopeKind kind = ScopeKind::Repository;
  std::string id;
  uint64_t loc_total = 0;  // non-excluded methods only
  BucketStat trivial;
  BucketStat testable;
  BucketStat not_testable;
  // LOC per reason key; methods with several reasons count under each.
  std::map<std::string, uint64_t> reason_loc;
};

struct MethodRecord {
  MethodId id;
  MethodClassification classification;
  uint32_t loc = 0;
  uint32_t complexity = 0;  // 0 when there is no body
  uint32_t line = 0;
  std::string module;
  std::string package;
};

// Largest-remainder integer percentages for the three buckets.
void fill_percentages(Segmentation& seg);

// One segmentation per scope of each granularity, plus the repository one.
// Methods always belong to exactly one module and one package.
std::vector<Segmentation> aggregate_segmentation(
    const std::vector<MethodRecord>& records);

}  // namespace testmap

#endif  // TESTMAP_CLASSIFY_HPP_
