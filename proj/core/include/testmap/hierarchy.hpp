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
// Type hierarchy and class-hierarchy-analysis call graph.

#ifndef TESTMAP_HIERARCHY_HPP_
#define TESTMAP_HIERARCHY_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "testmap/mockability_types.hpp"
#include "testmap/pool.hpp"

namespace testmap {

class TypeHierarchy {
 public:
  // Throws CyclicHierarchy when parsed superclass edges form a cycle.
  static TypeHierarchy build(const ClassPool& pool);

  bool is_parsed(const std::string& type) const;
  bool is_phantom(const std::string& type) const;
  bool is_concrete(const std::string& type) const;

  // Direct superclass (parsed types only; java/lang/Object has none).
  std::optional<std::string> super_of(const std::string& type) const;

  // Direct subtypes: subclasses plus direct implementors for interfaces.
  const std::vector<std::string>& subtypes_of(const std::string& type) const;

  // type and every parsed type below it, alphabetically ordered.
  std::vector<std::string> cone_of(const std::string& type) const;

  // Whether `maybe_super` is `type` or a (transitive) parsed supertype of it,
  // via superclass or interface edges.
  bool is_subtype_of(const std::string& type,
                     const std::string& maybe_super) const;

  const std::set<std::string>& phantoms() const { return phantoms_; }

 private:
  std::set<std::string> parsed_;
  std::set<std::string> non_concrete_;  // parsed interfaces/abstract classes
  std::map<std::string, std::vector<std::string>> subtypes_;
  std::map<std::string, std::optional<std::string>> supers_;
  std::map<std::string, std::vector<std::string>> interfaces_;
  std::set<std::string> phantoms_;
  std::vector<std::string> no_subtypes_;
};

struct CallSite {
  MethodId caller;
  uint32_t offset = 0;
  Dispatch dispatch = Dispatch::Static;
  MethodId declared;                      // callee named at the site
  std::optional<Provenance> receiver;     // absent for static/dynamic sites
  std::vector<MethodId> resolved_targets; // sorted, deduplicated
  bool targets_unknown = false;           // an Unknown member is in the set
  uint32_t line = 0;                      // source line of the site, 0 if none
};

// Target set of one call site under class-hierarchy analysis. Never fails:
// anything unresolvable is reported through `targets_unknown`.
struct ResolvedTargets {
  std::vector<MethodId> targets;
  bool unknown = false;
};

ResolvedTargets resolve_call(Dispatch dispatch, const MethodId& declared,
                             const ClassPool& pool, const TypeHierarchy& h);

class CallGraph {
 public:
  static CallGraph build(const ClassPool& pool, const TypeHierarchy& h,
                         int threads = 1);

  // Reuses precomputed receiver simulations (keyed by method id).
  static CallGraph build(const ClassPool& pool, const TypeHierarchy& h,
                         const std::map<MethodId, SimResult>& sims);

  // Edges of one caller, ordered by instruction offset.
  const std::vector<CallSite>& sites_of(const MethodId& caller) const;

  // All callers, sorted by MethodId.
  std::vector<MethodId> callers() const;

  size_t site_count() const;

 private:
  std::map<MethodId, std::vector<CallSite>> edges_;
  std::vector<CallSite> no_sites_;
};

}  // namespace testmap

#endif  // TESTMAP_HIERARCHY_HPP_
