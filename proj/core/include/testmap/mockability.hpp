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
// The non-mockable analysis: receiver provenance, field injectability and
// the least fixed point over the call graph, with witness traces. The
// analysis under-approximates: every reported issue is provable, silence is
// not a guarantee.

#ifndef TESTMAP_MOCKABILITY_HPP_
#define TESTMAP_MOCKABILITY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "testmap/hierarchy.hpp"
#include "testmap/knowledge.hpp"
#include "testmap/mockability_types.hpp"
#include "testmap/pool.hpp"

namespace testmap {

// Abstract interpretation of the operand stack and locals, tracking only
// provenance. Merges at control-flow joins take the least upper bound.
// Never fails; irreducible flow degrades to Unknown.
SimResult simulate_receivers(const MethodModel& m);

// Key of a field in the injectability map: "owner.name:descriptor".
std::string field_key(const FieldRef& f);
std::string field_key(const std::string& owner, const FieldModel& f);

using InjectabilityMap = std::map<std::string, Injectability>;

struct InjectabilityOptions {
  // A member is reachable from a test when it is not private (same-package
  // visibility). Set to true to require public/protected instead.
  bool require_public_access = false;
};

// Injectability of every field of every parsed class, from the stores seen
// in `sims` (keyed by method id).
InjectabilityMap compute_injectability(
    const ClassPool& pool, const std::map<MethodId, SimResult>& sims,
    const InjectabilityOptions& options = {});

// Single-field convenience form; simulates the whole pool on demand.
Injectability field_injectability(const ClassModel& owner, const FieldModel& f,
                                  const ClassPool& pool,
                                  const InjectabilityOptions& options = {});

struct MockabilityVerdict {
  bool non_mockable = false;
  Category category = Category::OtherNonDeterminism;
  // Violating call site with the smallest offset (absent for methods that
  // are themselves must-mock per the knowledge base).
  std::optional<CallSite> witness;
};

using VerdictMap = std::map<MethodId, MockabilityVerdict>;

struct MockabilityResult {
  VerdictMap verdicts;
  InjectabilityMap injectability;

  bool is_non_mockable(const MethodId& id) const;
};

// Least fixed point of the non-mockable induction over the call graph.
// `injectability_overrides` force specific fields' injectability, used for
// what-if queries. Deterministic: the result is the unique least fixed
// point regardless of scheduling.
MockabilityResult compute_nonmockable(
    const CallGraph& graph, const KnowledgeBase& kb, const ClassPool& pool,
    const TypeHierarchy& hierarchy, const InjectabilityMap& injectability,
    const InjectabilityMap& injectability_overrides = {});

struct TraceHop {
  MethodId method;
  uint32_t line = 0;  // source line of the call that leads to the next hop
};

struct TraceDiagnostic {
  std::vector<TraceHop> chain;  // first = the method, last = must-mock root
  Category category = Category::OtherNonDeterminism;
  // The non-injectable receiver field at the first hop, when the violation
  // goes through one.
  std::optional<FieldRef> receiver_field;
};

// Shortest witness chain from `m` through non-mockable callees to a
// must-mock root. Empty optional when `m` is mockable (not applicable).
std::optional<TraceDiagnostic> explain_trace(const MethodId& m,
                                             const MockabilityResult& result,
                                             const CallGraph& graph,
                                             const KnowledgeBase& kb,
                                             const ClassPool& pool,
                                             const TypeHierarchy& hierarchy);

}  // namespace testmap

#endif  // TESTMAP_MOCKABILITY_HPP_
