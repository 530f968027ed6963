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
// Observable effects per method. The non-observable set is
// under-approximated: whenever the analysis cannot decide, the effect
// counts as observable.

#include "testmap/observability.hpp"

#include <deque>

#include "testmap/metrics.hpp"
#include "testmap/opcodes.hpp"

namespace testmap {

namespace {

// A field a test can read: visible directly, or exposed by an accessible
// trivial getter on the owner class.
bool field_readable(const FieldRef& ref, const ObservabilityContext& ctx) {
  const ClassModel* owner = ctx.pool->find(ref.owner);
  if (!owner) return false;  // unknown field: not provably readable
  const FieldModel* f = owner->find_field(ref.name);
  if (!f) return false;
  if (!f->is_private()) {
    if (!ctx.options.require_public_access) return true;
    if (f->access_flags & (acc::kPublic | acc::kProtected)) return true;
  }
  for (const auto& m : owner->methods) {
    if (m.is_private() || !m.has_body()) continue;
    TrivialityVerdict v = detect_trivial(m);
    if (v.kind == TrivialKind::Getter && v.accessed_field.name == ref.name &&
        v.accessed_field.owner == ref.owner) {
      return true;
    }
  }
  return false;
}

Injectability receiver_injectability(const Provenance& p,
                                     const ObservabilityContext& ctx) {
  switch (p.kind) {
    case ProvenanceKind::Parameter:
      return Injectability::Injectable;
    case ProvenanceKind::ThisRef:
    case ProvenanceKind::NewInstance:
      return Injectability::NonInjectable;
    case ProvenanceKind::FieldRead:
    case ProvenanceKind::StaticFieldRead: {
      auto it = ctx.injectability->find(field_key(p.field));
      return it == ctx.injectability->end() ? Injectability::Unknown
                                            : it->second;
    }
    default:
      return Injectability::Unknown;
  }
}

bool receiver_type_mockable(const std::string& type,
                            const ObservabilityContext& ctx) {
  if (ctx.kb->mock_final_classes()) return true;
  const ClassModel* cls = ctx.pool->find(type);
  return !cls || !cls->is_final();
}

// Offsets reachable from `start` along normal control flow.
std::set<uint32_t> reachable_from(const MethodModel& m, uint32_t start) {
  std::map<uint32_t, size_t> index;
  for (size_t i = 0; i < m.instructions.size(); ++i) {
    index[m.instructions[i].offset] = i;
  }
  std::set<uint32_t> seen;
  std::deque<uint32_t> queue{start};
  while (!queue.empty()) {
    uint32_t offset = queue.front();
    queue.pop_front();
    if (!seen.insert(offset).second) continue;
    auto it = index.find(offset);
    if (it == index.end()) continue;
    const Instruction& ins = m.instructions[it->second];
    uint8_t opc = ins.opcode;
    bool terminal = (opc >= op::ireturn && opc <= op::return_) ||
                    opc == op::athrow;
    bool unconditional = opc == op::goto_ || opc == op::goto_w;
    if (ins.operand == OperandKind::Branch) queue.push_back(ins.branch_target);
    if (ins.operand == OperandKind::Switch) {
      queue.push_back(ins.switch_default);
      for (const auto& c : ins.switch_cases) queue.push_back(c.target);
    }
    if (!terminal && !unconditional && it->second + 1 < m.instructions.size()) {
      queue.push_back(m.instructions[it->second + 1].offset);
    }
  }
  return seen;
}

// A handler swallows the exception when nothing reachable from it rethrows
// or persists the caught value to a readable field. Anything unclear counts
// as escaping.
bool handler_swallows(const MethodModel& m, const ExceptionHandler& h,
                      const SimResult& sim, const ObservabilityContext& ctx) {
  std::set<uint32_t> region = reachable_from(m, h.handler_pc);
  for (const auto& ins : m.instructions) {
    if (!region.count(ins.offset)) continue;
    if (ins.opcode == op::athrow) return false;
    if (ins.opcode == op::putfield || ins.opcode == op::putstatic) {
      for (const auto& store : sim.stores) {
        if (store.offset != ins.offset) continue;
        if (store.value.kind == ProvenanceKind::CaughtException &&
            field_readable(store.field, ctx)) {
          return false;
        }
        // Imprecise provenance: assume the exception may be persisted.
        if (store.value.kind == ProvenanceKind::Unknown &&
            field_readable(store.field, ctx)) {
          return false;
        }
      }
    }
  }
  return true;
}

// Catch clauses we can prove to cover a throw: catch-all entries plus the
// universal supertypes. Everything else needs a parsed subtype proof.
bool handler_catches(const ExceptionHandler& h, const Provenance& thrown,
                     const ObservabilityContext& ctx) {
  if (h.catch_type.empty() || h.catch_type == "java/lang/Throwable" ||
      h.catch_type == "java/lang/Exception") {
    return true;
  }
  if (thrown.kind == ProvenanceKind::NewInstance &&
      ctx.hierarchy->is_parsed(thrown.type_name)) {
    return ctx.hierarchy->is_subtype_of(thrown.type_name, h.catch_type);
  }
  return false;
}

}  // namespace

std::set<ObservationPoint> observable_effects(const MethodModel& m,
                                              const SimResult& sim,
                                              const ObservabilityContext& ctx) {
  std::set<ObservationPoint> effects;
  if (!m.has_body()) return effects;

  if (!method_returns_void(m.id.descriptor)) {
    ObservationPoint p;
    p.kind = ObservationKind::ReturnValue;
    effects.insert(p);
  }

  for (const auto& ex : m.declared_exceptions) {
    ObservationPoint p;
    p.kind = ObservationKind::EscapingException;
    p.exception_type = ex;
    effects.insert(p);
  }

  for (const auto& t : sim.throws) {
    bool swallowed = false;
    for (const auto& h : m.exception_table) {
      if (h.start_pc <= t.offset && t.offset < h.end_pc &&
          handler_catches(h, t.value, ctx) &&
          handler_swallows(m, h, sim, ctx)) {
        swallowed = true;
        break;
      }
    }
    if (!swallowed) {
      ObservationPoint p;
      p.kind = ObservationKind::EscapingException;
      p.exception_type = t.value.kind == ProvenanceKind::NewInstance
                             ? t.value.type_name
                             : "java/lang/Throwable";
      effects.insert(p);
    }
  }

  for (const auto& store : sim.stores) {
    if (field_readable(store.field, ctx)) {
      ObservationPoint p;
      p.kind = ObservationKind::ReadableFieldWrite;
      p.field = store.field;
      effects.insert(p);
    }
  }

  for (const auto& ins : m.instructions) {
    if (ins.operand != OperandKind::Invoke) continue;
    if (ins.dispatch == Dispatch::Static || ins.dispatch == Dispatch::Dynamic) {
      continue;
    }
    if (classify_callee(ins.callee, *ctx.kb).is_sink()) continue;
    auto it = sim.call_receivers.find(ins.offset);
    Provenance receiver =
        it == sim.call_receivers.end() ? Provenance::unknown() : it->second;
    Injectability inj = receiver_injectability(receiver, ctx);
    if (inj == Injectability::NonInjectable) continue;
    if (!receiver_type_mockable(ins.callee.owner, ctx)) continue;
    ObservationPoint p;
    p.kind = ObservationKind::MockableDependencyCall;
    p.call_offset = ins.offset;
    p.callee = ins.callee;
    effects.insert(p);
  }

  return effects;
}

std::set<MethodId> compute_nonobservable(
    const ClassPool& pool, const std::map<MethodId, SimResult>& sims,
    const ObservabilityContext& ctx) {
  std::set<MethodId> result;
  for (const auto& cls : pool.classes()) {
    for (const auto& m : cls.methods) {
      if (!m.has_body()) continue;
      auto it = sims.find(m.id);
      if (it == sims.end()) continue;
      if (observable_effects(m, it->second, ctx).empty()) {
        result.insert(m.id);
      }
    }
  }
  return result;
}

}  // namespace testmap
