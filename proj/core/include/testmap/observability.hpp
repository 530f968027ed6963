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
// Which effects of a method a unit test could assert on. Reconstructed
// observability side of the testability model; under-approximates the
// non-observable set (imprecision always counts as observable).

#ifndef TESTMAP_OBSERVABILITY_HPP_
#define TESTMAP_OBSERVABILITY_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "testmap/hierarchy.hpp"
#include "testmap/knowledge.hpp"
#include "testmap/mockability.hpp"
#include "testmap/pool.hpp"

namespace testmap {

enum class ObservationKind {
  ReturnValue,
  EscapingException,
  ReadableFieldWrite,
  MockableDependencyCall,
};

struct ObservationPoint {
  ObservationKind kind;
  std::string exception_type;  // EscapingException
  FieldRef field;              // ReadableFieldWrite
  uint32_t call_offset = 0;    // MockableDependencyCall
  MethodId callee;             // MockableDependencyCall

  auto operator<=>(const ObservationPoint&) const = default;
};

struct ObservabilityContext {
  const ClassPool* pool = nullptr;
  const TypeHierarchy* hierarchy = nullptr;
  const CallGraph* graph = nullptr;
  const KnowledgeBase* kb = nullptr;
  const InjectabilityMap* injectability = nullptr;
  InjectabilityOptions options;
};

// Effects a test could observe: return value, escaping exceptions, stores
// to readable fields, calls to mockable dependencies. Requires a body.
std::set<ObservationPoint> observable_effects(const MethodModel& m,
                                              const SimResult& sim,
                                              const ObservabilityContext& ctx);

// Methods with a body and a provably empty effect set.
std::set<MethodId> compute_nonobservable(
    const ClassPool& pool, const std::map<MethodId, SimResult>& sims,
    const ObservabilityContext& ctx);

}  // namespace testmap

#endif  // TESTMAP_OBSERVABILITY_HPP_
