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
// Field injectability and the non-mockable least fixed point.
//
// A method is non-mockable if it must be mocked per the knowledge base, or
// if some call site propagates: static calls propagate while static mocking
// is disabled, instance calls propagate when the receiver cannot be
// replaced by a test (non-injectable provenance, or an unmockable receiver
// type). Sites whose targets are unknown never propagate, so every verdict
// is backed by a provable chain.

#include "testmap/mockability.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "testmap/opcodes.hpp"

namespace testmap {

std::string field_key(const FieldRef& f) {
  return f.owner + "." + f.name + ":" + f.descriptor;
}

std::string field_key(const std::string& owner, const FieldModel& f) {
  return owner + "." + f.name + ":" + f.descriptor;
}

bool MockabilityResult::is_non_mockable(const MethodId& id) const {
  auto it = verdicts.find(id);
  return it != verdicts.end() && it->second.non_mockable;
}

namespace {

bool accessible(uint16_t access_flags, const InjectabilityOptions& options) {
  if (access_flags & acc::kPrivate) return false;
  if (options.require_public_access) {
    return (access_flags & (acc::kPublic | acc::kProtected)) != 0;
  }
  return true;  // public, protected or package-visible
}

}  // namespace

InjectabilityMap compute_injectability(
    const ClassPool& pool, const std::map<MethodId, SimResult>& sims,
    const InjectabilityOptions& options) {
  // Every store to every field, across the whole pool.
  struct StoreInfo {
    const MethodModel* method;
    Provenance value;
  };
  std::map<std::string, std::vector<StoreInfo>> stores_by_field;
  for (const auto& cls : pool.classes()) {
    for (const auto& m : cls.methods) {
      auto it = sims.find(m.id);
      if (it == sims.end()) continue;
      for (const auto& store : it->second.stores) {
        stores_by_field[field_key(store.field)].push_back(
            StoreInfo{&m, store.value});
      }
    }
  }

  InjectabilityMap result;
  for (const auto& cls : pool.classes()) {
    for (const auto& f : cls.fields) {
      std::string key = field_key(cls.internal_name, f);

      // (a) Directly writable from a test.
      if (!f.is_final() && accessible(f.access_flags, options)) {
        result[key] = Injectability::Injectable;
        continue;
      }

      auto it = stores_by_field.find(key);
      const std::vector<StoreInfo>* stores =
          it == stores_by_field.end() ? nullptr : &it->second;

      // (b)/(c) An accessible constructor or setter-like method stores one
      // of its parameters into the field.
      bool param_store = false;
      bool only_internal_sources = true;
      if (stores) {
        for (const StoreInfo& s : *stores) {
          bool is_param = s.value.kind == ProvenanceKind::Parameter;
          if (is_param && accessible(s.method->access_flags, options)) {
            param_store = true;
          }
          if (s.value.kind != ProvenanceKind::NewInstance &&
              s.value.kind != ProvenanceKind::StaticFieldRead) {
            only_internal_sources = false;
          }
        }
      }
      if (param_store) {
        result[key] = Injectability::Injectable;
      } else if (only_internal_sources) {
        // Every store (or the absence of any) supplies an object a test can
        // never hand in, and there is no visible write path.
        result[key] = Injectability::NonInjectable;
      } else {
        result[key] = Injectability::Unknown;
      }
    }
  }
  return result;
}

Injectability field_injectability(const ClassModel& owner, const FieldModel& f,
                                  const ClassPool& pool,
                                  const InjectabilityOptions& options) {
  std::map<MethodId, SimResult> sims;
  for (const auto& cls : pool.classes()) {
    for (const auto& m : cls.methods) {
      if (m.has_body()) sims.emplace(m.id, simulate_receivers(m));
    }
  }
  InjectabilityMap map = compute_injectability(pool, sims, options);
  auto it = map.find(field_key(owner.internal_name, f));
  return it == map.end() ? Injectability::Unknown : it->second;
}

namespace {

Injectability receiver_injectability(const Provenance& p,
                                     const InjectabilityMap& fields,
                                     const InjectabilityMap& overrides) {
  switch (p.kind) {
    case ProvenanceKind::Parameter:
      return Injectability::Injectable;
    case ProvenanceKind::ThisRef:
      // The object under test itself: replacing it with a mock would test
      // the mock, not the method. Calls through `this` stay on the chain.
      return Injectability::NonInjectable;
    case ProvenanceKind::NewInstance:
      return Injectability::NonInjectable;
    case ProvenanceKind::FieldRead:
    case ProvenanceKind::StaticFieldRead: {
      std::string key = field_key(p.field);
      if (auto it = overrides.find(key); it != overrides.end()) {
        return it->second;
      }
      if (auto it = fields.find(key); it != fields.end()) return it->second;
      return Injectability::Unknown;  // field of an unparsed class
    }
    case ProvenanceKind::ReturnOf:
    case ProvenanceKind::CaughtException:
    case ProvenanceKind::Unknown:
      return Injectability::Unknown;
  }
  return Injectability::Unknown;
}

struct PropagationContext {
  const KnowledgeBase* kb;
  const ClassPool* pool;
  const TypeHierarchy* hierarchy;
  const InjectabilityMap* injectability;
  const InjectabilityMap* overrides;
};

bool receiver_type_mockable(const std::string& type,
                            const PropagationContext& ctx) {
  if (ctx.kb->mock_final_classes()) return true;
  const ClassModel* cls = ctx.pool->find(type);
  if (!cls) return true;  // phantoms are assumed mockable
  return !cls->is_final();
}

// Whether the site's shape lets non-mockability flow to the caller,
// independent of target verdicts.
bool propagation_condition(const CallSite& site, const PropagationContext& ctx) {
  if (site.dispatch == Dispatch::Dynamic) return false;
  if (classify_callee(site.declared, *ctx.kb).is_sink()) return false;
  if (site.dispatch == Dispatch::Static) {
    return !ctx.kb->mock_static_methods();
  }
  Injectability inj = receiver_injectability(
      site.receiver.value_or(Provenance::unknown()), *ctx.injectability,
      *ctx.overrides);
  if (inj == Injectability::NonInjectable) return true;
  // Injectable or Unknown receivers cut the chain, unless the receiver's
  // static type cannot be mocked at all.
  return !receiver_type_mockable(site.declared.owner, ctx);
}

bool targets_all_marked(const CallSite& site,
                        const std::set<MethodId>& marked) {
  if (site.targets_unknown || site.resolved_targets.empty()) return false;
  for (const auto& t : site.resolved_targets) {
    if (!marked.count(t)) return false;
  }
  return true;
}

bool site_violates(const CallSite& site, const std::set<MethodId>& marked,
                   const PropagationContext& ctx) {
  return propagation_condition(site, ctx) && targets_all_marked(site, marked);
}

}  // namespace

MockabilityResult compute_nonmockable(
    const CallGraph& graph, const KnowledgeBase& kb, const ClassPool& pool,
    const TypeHierarchy& hierarchy, const InjectabilityMap& injectability,
    const InjectabilityMap& injectability_overrides) {
  MockabilityResult result;
  result.injectability = injectability;
  PropagationContext ctx{&kb, &pool, &hierarchy, &injectability,
                         &injectability_overrides};

  // Node universe: defined methods plus every callee identity referenced
  // from their code, so must-mock roots outside the pool participate.
  std::set<MethodId> universe;
  std::vector<MethodId> callers = graph.callers();
  for (const auto& caller : callers) {
    universe.insert(caller);
    for (const auto& site : graph.sites_of(caller)) {
      if (!site.declared.owner.empty()) universe.insert(site.declared);
      for (const auto& t : site.resolved_targets) universe.insert(t);
    }
  }

  // Base: must-mock callees are non-mockable by definition.
  std::set<MethodId> marked;
  std::set<MethodId> base;
  for (const auto& id : universe) {
    if (classify_callee(id, kb).is_must_mock()) {
      marked.insert(id);
      base.insert(id);
    }
  }

  // Reverse edges: target -> callers whose sites resolve to it.
  std::map<MethodId, std::vector<const MethodId*>> dependents;
  for (const auto& caller : callers) {
    for (const auto& site : graph.sites_of(caller)) {
      for (const auto& t : site.resolved_targets) {
        dependents[t].push_back(&caller);
      }
      if (!site.declared.owner.empty()) {
        dependents[site.declared].push_back(&caller);
      }
    }
  }

  // Least fixed point; monotone, so any schedule converges to the same set.
  std::deque<MethodId> worklist(marked.begin(), marked.end());
  while (!worklist.empty()) {
    MethodId changed = std::move(worklist.front());
    worklist.pop_front();
    auto deps = dependents.find(changed);
    if (deps == dependents.end()) continue;
    for (const MethodId* caller : deps->second) {
      if (marked.count(*caller)) continue;
      for (const auto& site : graph.sites_of(*caller)) {
        if (site_violates(site, marked, ctx)) {
          marked.insert(*caller);
          worklist.push_back(*caller);
          break;
        }
      }
    }
  }

  // Witnesses are assigned against the final set, so they do not depend on
  // the worklist order: the first violating site in offset order. The
  // category follows the witness chain down to its must-mock root
  // (memoized; chains are well-founded, the guard only covers damaged
  // state).
  std::map<MethodId, const CallSite*> witness_of;
  for (const auto& id : marked) {
    if (base.count(id)) continue;
    for (const auto& site : graph.sites_of(id)) {
      if (site_violates(site, marked, ctx)) {
        witness_of[id] = &site;
        break;
      }
    }
  }

  std::map<MethodId, Category> category_of;
  std::function<Category(const MethodId&, std::set<MethodId>&)> resolve =
      [&](const MethodId& id, std::set<MethodId>& visiting) -> Category {
    if (auto it = category_of.find(id); it != category_of.end()) {
      return it->second;
    }
    Category category = Category::OtherNonDeterminism;
    if (base.count(id)) {
      category = classify_callee(id, kb).category;
    } else if (auto wit = witness_of.find(id);
               wit != witness_of.end() && visiting.insert(id).second) {
      const CallSite& site = *wit->second;
      CalleeClassification declared_cls = classify_callee(site.declared, kb);
      if (declared_cls.is_must_mock()) {
        category = declared_cls.category;
      } else {
        category = resolve(site.resolved_targets.front(), visiting);
      }
      visiting.erase(id);
    }
    category_of[id] = category;
    return category;
  };

  for (const auto& id : marked) {
    MockabilityVerdict verdict;
    verdict.non_mockable = true;
    std::set<MethodId> visiting;
    verdict.category = resolve(id, visiting);
    if (auto wit = witness_of.find(id); wit != witness_of.end()) {
      verdict.witness = *wit->second;
    }
    result.verdicts[id] = std::move(verdict);
  }

  return result;
}

std::optional<TraceDiagnostic> explain_trace(const MethodId& m,
                                             const MockabilityResult& result,
                                             const CallGraph& graph,
                                             const KnowledgeBase& kb,
                                             const ClassPool& pool,
                                             const TypeHierarchy& hierarchy) {
  if (!result.is_non_mockable(m)) return std::nullopt;

  PropagationContext ctx{&kb, &pool, &hierarchy, &result.injectability,
                         nullptr};
  InjectabilityMap no_overrides;
  ctx.overrides = &no_overrides;

  std::set<MethodId> marked;
  for (const auto& [id, v] : result.verdicts) {
    if (v.non_mockable) marked.insert(id);
  }

  // Breadth-first search through violating sites to the nearest must-mock
  // root; FIFO order with offset-ordered expansion keeps it deterministic.
  std::map<MethodId, std::pair<MethodId, uint32_t>> predecessor;
  std::deque<MethodId> queue{m};
  std::set<MethodId> visited{m};
  std::optional<MethodId> terminal;

  while (!queue.empty() && !terminal) {
    MethodId cur = queue.front();
    queue.pop_front();
    if (classify_callee(cur, kb).is_must_mock()) {
      terminal = cur;
      break;
    }
    for (const auto& site : graph.sites_of(cur)) {
      if (!site_violates(site, marked, ctx)) continue;
      CalleeClassification declared_cls = classify_callee(site.declared, kb);
      std::vector<MethodId> nexts;
      if (declared_cls.is_must_mock()) {
        nexts.push_back(site.declared);
      } else {
        nexts = site.resolved_targets;
      }
      for (const auto& next : nexts) {
        if (!visited.insert(next).second) continue;
        predecessor[next] = {cur, site.line};
        if (classify_callee(next, kb).is_must_mock()) {
          terminal = next;
          break;
        }
        queue.push_back(next);
      }
      if (terminal) break;
    }
  }

  TraceDiagnostic diag;
  if (!terminal) {
    // The method is itself a must-mock root (chain of length one) or the
    // stored verdict category stands on its own.
    diag.chain.push_back(TraceHop{m, 0});
    diag.category = result.verdicts.at(m).category;
    return diag;
  }

  // Walk back from the terminal.
  std::vector<TraceHop> reversed;
  MethodId cur = *terminal;
  uint32_t line = 0;
  while (true) {
    reversed.push_back(TraceHop{cur, line});
    auto it = predecessor.find(cur);
    if (it == predecessor.end()) break;
    line = it->second.second;
    cur = it->second.first;
    if (cur == m) {
      reversed.push_back(TraceHop{m, line});
      break;
    }
  }
  // The walk assigned each hop the line of its own outgoing call; the
  // terminal has none.
  std::reverse(reversed.begin(), reversed.end());
  diag.chain = std::move(reversed);
  diag.category = classify_callee(*terminal, kb).category;

  // Surface the non-injectable receiver field of the first hop, when the
  // chain enters through one.
  if (diag.chain.size() >= 2) {
    const MethodId& next = diag.chain[1].method;
    for (const auto& site : graph.sites_of(m)) {
      if (!site_violates(site, marked, ctx)) continue;
      bool leads_to_next =
          (classify_callee(site.declared, kb).is_must_mock() &&
           site.declared == next) ||
          std::count(site.resolved_targets.begin(), site.resolved_targets.end(),
                     next) > 0;
      if (!leads_to_next || !site.receiver) continue;
      const Provenance& p = *site.receiver;
      if (p.kind == ProvenanceKind::FieldRead ||
          p.kind == ProvenanceKind::StaticFieldRead) {
        diag.receiver_field = p.field;
      }
      break;
    }
  }
  return diag;
}

}  // namespace testmap
