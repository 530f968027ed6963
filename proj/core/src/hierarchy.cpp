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
// Type hierarchy construction and CHA dispatch resolution. Supertypes that
// are not in the pool become phantom nodes: assumed concrete, no members,
// resolved conservatively to Unknown.

#include "testmap/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <thread>

#include "testmap/errors.hpp"
#include "testmap/mockability.hpp"

namespace testmap {

TypeHierarchy TypeHierarchy::build(const ClassPool& pool) {
  TypeHierarchy h;

  auto note_ref = [&](const std::string& type) {
    if (!type.empty() && type[0] != '[' && !pool.contains(type)) {
      h.phantoms_.insert(type);
    }
  };

  for (const auto& cls : pool.classes()) {
    h.parsed_.insert(cls.internal_name);
    if (!cls.is_concrete()) h.non_concrete_.insert(cls.internal_name);
    if (cls.super_name) {
      h.supers_[cls.internal_name] = cls.super_name;
      h.subtypes_[*cls.super_name].push_back(cls.internal_name);
      note_ref(*cls.super_name);
    } else {
      h.supers_[cls.internal_name] = std::nullopt;
    }
    h.interfaces_[cls.internal_name] = cls.interfaces;
    for (const auto& itf : cls.interfaces) {
      h.subtypes_[itf].push_back(cls.internal_name);
      note_ref(itf);
    }
    // Types referenced from code count as phantoms too when unparsed.
    for (const auto& m : cls.methods) {
      for (const auto& ins : m.instructions) {
        if (ins.operand == OperandKind::Invoke && !ins.callee.owner.empty()) {
          note_ref(ins.callee.owner);
        } else if (ins.operand == OperandKind::Field) {
          note_ref(ins.field.owner);
        }
      }
    }
  }
  for (auto& [type, subs] : h.subtypes_) {
    std::sort(subs.begin(), subs.end());
    subs.erase(std::unique(subs.begin(), subs.end()), subs.end());
  }

  // Superclass edges over parsed types must be acyclic.
  for (const auto& cls : pool.classes()) {
    std::string slow = cls.internal_name;
    const ClassModel* cur = &cls;
    std::set<std::string> seen;
    while (cur && cur->super_name) {
      if (!seen.insert(cur->internal_name).second) {
        throw CyclicHierarchy("superclass cycle through " + cur->internal_name);
      }
      cur = pool.find(*cur->super_name);
    }
    (void)slow;
  }
  return h;
}

bool TypeHierarchy::is_parsed(const std::string& type) const {
  return parsed_.count(type) > 0;
}

bool TypeHierarchy::is_phantom(const std::string& type) const {
  return phantoms_.count(type) > 0;
}

bool TypeHierarchy::is_concrete(const std::string& type) const {
  // Phantoms are assumed concrete.
  return non_concrete_.count(type) == 0;
}

std::optional<std::string> TypeHierarchy::super_of(const std::string& type) const {
  auto it = supers_.find(type);
  return it == supers_.end() ? std::nullopt : it->second;
}

const std::vector<std::string>& TypeHierarchy::subtypes_of(
    const std::string& type) const {
  auto it = subtypes_.find(type);
  return it == subtypes_.end() ? no_subtypes_ : it->second;
}

std::vector<std::string> TypeHierarchy::cone_of(const std::string& type) const {
  std::set<std::string> seen;
  std::deque<std::string> queue{type};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    if (!seen.insert(cur).second) continue;
    for (const auto& sub : subtypes_of(cur)) queue.push_back(sub);
  }
  return {seen.begin(), seen.end()};
}

bool TypeHierarchy::is_subtype_of(const std::string& type,
                                  const std::string& maybe_super) const {
  if (type == maybe_super) return true;
  std::deque<std::string> queue{type};
  std::set<std::string> seen;
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    if (!seen.insert(cur).second) continue;
    if (cur == maybe_super) return true;
    auto sup = super_of(cur);
    if (sup) queue.push_back(*sup);
    auto it = interfaces_.find(cur);
    if (it != interfaces_.end()) {
      for (const auto& i : it->second) queue.push_back(i);
    }
  }
  return false;
}

namespace {

enum class LookupStatus { Found, HitPhantom, NotFound };

struct LookupResult {
  LookupStatus status = LookupStatus::NotFound;
  MethodId method;
};

// Lexical lookup of a body-bearing definition: the superclass chain first,
// then superinterfaces (default methods), breadth first.
LookupResult lookup_concrete(const std::string& from, const std::string& name,
                             const std::string& descriptor,
                             const ClassPool& pool) {
  bool hit_phantom = false;
  std::string cur = from;
  std::vector<std::string> interface_frontier;
  while (true) {
    const ClassModel* cls = pool.find(cur);
    if (!cls) {
      hit_phantom = true;
      break;
    }
    const MethodModel* m = cls->find_method(name, descriptor);
    if (m && !m->is_abstract()) {
      return {LookupStatus::Found, m->id};
    }
    if (m && m->is_abstract()) {
      // Declared abstract here; the definition can only be below `from`.
      break;
    }
    interface_frontier.insert(interface_frontier.end(), cls->interfaces.begin(),
                              cls->interfaces.end());
    if (!cls->super_name) break;
    cur = *cls->super_name;
  }
  std::deque<std::string> queue(interface_frontier.begin(),
                                interface_frontier.end());
  std::set<std::string> seen;
  while (!queue.empty()) {
    std::string itf = queue.front();
    queue.pop_front();
    if (!seen.insert(itf).second) continue;
    const ClassModel* cls = pool.find(itf);
    if (!cls) {
      hit_phantom = true;
      continue;
    }
    const MethodModel* m = cls->find_method(name, descriptor);
    if (m && !m->is_abstract()) return {LookupStatus::Found, m->id};
    for (const auto& sup : cls->interfaces) queue.push_back(sup);
  }
  return {hit_phantom ? LookupStatus::HitPhantom : LookupStatus::NotFound, {}};
}

}  // namespace

ResolvedTargets resolve_call(Dispatch dispatch, const MethodId& declared,
                             const ClassPool& pool, const TypeHierarchy& h) {
  ResolvedTargets out;
  switch (dispatch) {
    case Dispatch::Dynamic:
      out.unknown = true;
      return out;
    case Dispatch::Static:
    case Dispatch::Special: {
      LookupResult r =
          lookup_concrete(declared.owner, declared.name, declared.descriptor, pool);
      // When lookup cannot find a parsed body the call still goes to exactly
      // the named method; keep its identity so the knowledge base can see it.
      out.targets.push_back(r.status == LookupStatus::Found ? r.method
                                                            : declared);
      return out;
    }
    case Dispatch::Virtual:
    case Dispatch::Interface: {
      if (!pool.contains(declared.owner)) {
        out.unknown = true;
        return out;
      }
      std::set<MethodId> targets;
      for (const auto& type : h.cone_of(declared.owner)) {
        const ClassModel* cls = pool.find(type);
        if (!cls || !cls->is_concrete()) continue;
        LookupResult r = lookup_concrete(type, declared.name,
                                         declared.descriptor, pool);
        if (r.status == LookupStatus::Found) {
          targets.insert(r.method);
        } else {
          out.unknown = true;
        }
      }
      if (targets.empty()) out.unknown = true;
      out.targets.assign(targets.begin(), targets.end());
      return out;
    }
  }
  out.unknown = true;
  return out;
}

CallGraph CallGraph::build(const ClassPool& pool, const TypeHierarchy& h,
                           int threads) {
  std::map<MethodId, SimResult> sims;
  std::vector<const MethodModel*> methods;
  for (const auto& cls : pool.classes()) {
    for (const auto& m : cls.methods) {
      if (m.has_body()) methods.push_back(&m);
    }
  }
  std::vector<SimResult> slots(methods.size());
  auto worker = [&](size_t begin, size_t step) {
    for (size_t i = begin; i < methods.size(); i += step) {
      slots[i] = simulate_receivers(*methods[i]);
    }
  };
  threads = std::max(1, threads);
  if (threads == 1 || methods.size() < 2) {
    worker(0, 1);
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back(worker, static_cast<size_t>(t),
                           static_cast<size_t>(threads));
    }
    for (auto& w : workers) w.join();
  }
  for (size_t i = 0; i < methods.size(); ++i) {
    sims.emplace(methods[i]->id, std::move(slots[i]));
  }
  return build(pool, h, sims);
}

CallGraph CallGraph::build(const ClassPool& pool, const TypeHierarchy& h,
                           const std::map<MethodId, SimResult>& sims) {
  auto line_at = [](const MethodModel& m, uint32_t offset) -> uint32_t {
    uint32_t line = 0;
    for (const auto& e : m.line_table) {
      if (e.start_pc <= offset) line = e.line;
    }
    return line;
  };

  CallGraph g;
  static const SimResult kEmptySim;
  for (const auto& cls : pool.classes()) {
    for (const auto& m : cls.methods) {
      std::vector<CallSite> sites;
      if (m.has_body()) {
        auto sim_it = sims.find(m.id);
        const SimResult& sim =
            sim_it == sims.end() ? kEmptySim : sim_it->second;
        for (const auto& ins : m.instructions) {
          if (ins.operand != OperandKind::Invoke) continue;
          CallSite site;
          site.caller = m.id;
          site.offset = ins.offset;
          site.dispatch = ins.dispatch;
          site.declared = ins.callee;
          site.line = line_at(m, ins.offset);
          if (ins.dispatch != Dispatch::Static &&
              ins.dispatch != Dispatch::Dynamic) {
            auto it = sim.call_receivers.find(ins.offset);
            site.receiver = it != sim.call_receivers.end()
                                ? it->second
                                : Provenance::unknown();
          }
          ResolvedTargets rt = resolve_call(ins.dispatch, ins.callee, pool, h);
          site.resolved_targets = std::move(rt.targets);
          site.targets_unknown = rt.unknown;
          sites.push_back(std::move(site));
        }
      }
      g.edges_.emplace(m.id, std::move(sites));
    }
  }
  return g;
}

const std::vector<CallSite>& CallGraph::sites_of(const MethodId& caller) const {
  auto it = edges_.find(caller);
  return it == edges_.end() ? no_sites_ : it->second;
}

std::vector<MethodId> CallGraph::callers() const {
  std::vector<MethodId> out;
  out.reserve(edges_.size());
  for (const auto& [id, _] : edges_) out.push_back(id);
  return out;
}

size_t CallGraph::site_count() const {
  size_t n = 0;
  for (const auto& [_, sites] : edges_) n += sites.size();
  return n;
}

}  // namespace testmap
