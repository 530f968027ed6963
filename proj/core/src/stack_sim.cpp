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
// Abstract interpretation of the operand stack and local variables,
// tracking provenance only. Category-2 values occupy two stack slots so the
// dup/pop family behaves exactly like the real machine. Control-flow joins
// take the least upper bound; anything odd degrades to Unknown, never fails.

#include <deque>
#include <map>
#include <set>
#include <vector>

#include "testmap/mockability.hpp"
#include "testmap/opcodes.hpp"

namespace testmap {

Provenance Provenance::parameter(int index) {
  Provenance p;
  p.kind = ProvenanceKind::Parameter;
  p.param_index = index;
  return p;
}

Provenance Provenance::this_ref() {
  Provenance p;
  p.kind = ProvenanceKind::ThisRef;
  return p;
}

Provenance Provenance::field_read(FieldRef f) {
  Provenance p;
  p.kind = ProvenanceKind::FieldRead;
  p.field = std::move(f);
  return p;
}

Provenance Provenance::static_field_read(FieldRef f) {
  Provenance p;
  p.kind = ProvenanceKind::StaticFieldRead;
  p.field = std::move(f);
  return p;
}

Provenance Provenance::new_instance(std::string type) {
  Provenance p;
  p.kind = ProvenanceKind::NewInstance;
  p.type_name = std::move(type);
  return p;
}

Provenance Provenance::return_of(uint32_t call_offset) {
  Provenance p;
  p.kind = ProvenanceKind::ReturnOf;
  p.call_offset = call_offset;
  return p;
}

Provenance Provenance::caught_exception() {
  Provenance p;
  p.kind = ProvenanceKind::CaughtException;
  return p;
}

Provenance Provenance::join(const Provenance& a, const Provenance& b) {
  if (a == b) return a;
  return unknown();
}

std::string Provenance::display() const {
  switch (kind) {
    case ProvenanceKind::Parameter:
      return "parameter(" + std::to_string(param_index) + ")";
    case ProvenanceKind::FieldRead:
      return "field " + field.display();
    case ProvenanceKind::StaticFieldRead:
      return "static field " + field.display();
    case ProvenanceKind::NewInstance:
      return "new " + type_name;
    case ProvenanceKind::ReturnOf:
      return "return of call at " + std::to_string(call_offset);
    case ProvenanceKind::ThisRef:
      return "this";
    case ProvenanceKind::CaughtException:
      return "caught exception";
    case ProvenanceKind::Unknown:
      return "unknown";
  }
  return "?";
}

namespace {

struct SimBail {};

struct State {
  std::vector<Provenance> stack;
  std::vector<Provenance> locals;
  bool valid = false;
};

bool join_into(State& dst, const State& src) {
  if (!dst.valid) {
    dst = src;
    return true;
  }
  bool changed = false;
  if (dst.stack.size() != src.stack.size()) {
    // Inconsistent stack depths never occur in verified bytecode; bail out.
    throw SimBail{};
  }
  for (size_t i = 0; i < dst.stack.size(); ++i) {
    Provenance joined = Provenance::join(dst.stack[i], src.stack[i]);
    if (!(joined == dst.stack[i])) {
      dst.stack[i] = joined;
      changed = true;
    }
  }
  size_t n = std::max(dst.locals.size(), src.locals.size());
  dst.locals.resize(n, Provenance::unknown());
  for (size_t i = 0; i < n; ++i) {
    Provenance other = i < src.locals.size() ? src.locals[i]
                                             : Provenance::unknown();
    Provenance joined = Provenance::join(dst.locals[i], other);
    if (!(joined == dst.locals[i])) {
      dst.locals[i] = joined;
      changed = true;
    }
  }
  return changed;
}

class Simulator {
 public:
  explicit Simulator(const MethodModel& m) : m_(m) {
    for (size_t i = 0; i < m.instructions.size(); ++i) {
      index_[m.instructions[i].offset] = i;
    }
  }

  SimResult run() {
    for (const auto& ins : m_.instructions) {
      if (ins.opcode == op::jsr || ins.opcode == op::jsr_w ||
          ins.opcode == op::ret) {
        return degraded();
      }
    }
    try {
      fixpoint();
      return collect();
    } catch (const SimBail&) {
      return degraded();
    }
  }

 private:
  State initial_state() const {
    State s;
    s.valid = true;
    int slot = 0;
    s.locals.resize(std::max<size_t>(m_.max_locals, 4), Provenance::unknown());
    if (!m_.is_static()) {
      if (s.locals.empty()) s.locals.resize(1, Provenance::unknown());
      s.locals[0] = Provenance::this_ref();
      slot = 1;
    }
    for (const auto& type : method_arg_types(m_.id.descriptor)) {
      if (static_cast<size_t>(slot) >= s.locals.size()) {
        s.locals.resize(slot + 2, Provenance::unknown());
      }
      s.locals[slot] = Provenance::parameter(slot);
      slot += field_descriptor_slots(type);
    }
    return s;
  }

  void merge(uint32_t offset, const State& state) {
    if (!index_.count(offset)) throw SimBail{};
    State& entry = entry_[offset];
    if (join_into(entry, state)) worklist_.insert(offset);
  }

  void fixpoint() {
    if (m_.instructions.empty()) return;
    merge(m_.instructions.front().offset, initial_state());
    while (!worklist_.empty()) {
      uint32_t offset = *worklist_.begin();
      worklist_.erase(worklist_.begin());
      const State& entry = entry_[offset];

      // Any covered instruction may transfer control to its handlers with
      // the locals it started with and just the exception on the stack.
      for (const auto& h : m_.exception_table) {
        if (h.start_pc <= offset && offset < h.end_pc) {
          State hs;
          hs.valid = true;
          hs.locals = entry.locals;
          hs.stack = {Provenance::caught_exception()};
          merge(h.handler_pc, hs);
        }
      }

      const Instruction& ins = m_.instructions[index_.at(offset)];
      State out = entry;
      bool falls_through = step(ins, out);
      if (falls_through) {
        size_t next = index_.at(offset) + 1;
        if (next < m_.instructions.size()) {
          merge(m_.instructions[next].offset, out);
        }
      }
      if (ins.operand == OperandKind::Branch) {
        merge(ins.branch_target, out);
      } else if (ins.operand == OperandKind::Switch) {
        merge(ins.switch_default, out);
        for (const auto& c : ins.switch_cases) merge(c.target, out);
      }
    }
  }

  // Applies one instruction's stack effect. Returns whether execution can
  // fall through to the next instruction.
  bool step(const Instruction& ins, State& s) {
    auto pop = [&](int n) {
      if (static_cast<int>(s.stack.size()) < n) throw SimBail{};
      s.stack.resize(s.stack.size() - n);
    };
    auto top = [&](int depth_from_top) -> Provenance& {
      if (s.stack.size() <= static_cast<size_t>(depth_from_top)) throw SimBail{};
      return s.stack[s.stack.size() - 1 - depth_from_top];
    };
    auto push = [&](const Provenance& p) { s.stack.push_back(p); };
    auto push_slots = [&](int slots, const Provenance& p) {
      if (slots >= 1) push(p);
      if (slots == 2) push(Provenance::unknown());
    };
    auto local_at = [&](uint16_t idx) -> Provenance {
      return idx < s.locals.size() ? s.locals[idx] : Provenance::unknown();
    };
    auto set_local = [&](uint16_t idx, const Provenance& p, int slots) {
      if (static_cast<size_t>(idx) + slots > s.locals.size()) {
        s.locals.resize(idx + slots, Provenance::unknown());
      }
      s.locals[idx] = p;
      if (slots == 2) s.locals[idx + 1] = Provenance::unknown();
    };

    uint8_t opc = ins.opcode;

    // Constants.
    if (opc == op::nop) return true;
    if (opc == op::aconst_null || (opc >= op::iconst_m1 && opc <= op::iconst_5) ||
        (opc >= op::fconst_0 && opc <= op::fconst_2)) {
      push(Provenance::unknown());
      return true;
    }
    if (opc == op::lconst_0 || opc == op::lconst_1 || opc == op::dconst_0 ||
        opc == op::dconst_1) {
      push_slots(2, Provenance::unknown());
      return true;
    }
    if (ins.operand == OperandKind::Const) {
      push_slots(ins.const_cat, Provenance::unknown());
      return true;
    }

    // Local loads/stores.
    if ((opc >= op::iload && opc <= op::aload) ||
        (opc >= op::iload_0 && opc <= op::aload_3)) {
      uint8_t base = opc >= op::iload_0 ? (opc - op::iload_0) / 4 + op::iload
                                        : opc;
      int slots = (base == op::lload || base == op::dload) ? 2 : 1;
      push_slots(slots, local_at(ins.local));
      return true;
    }
    if ((opc >= op::istore && opc <= op::astore) ||
        (opc >= op::istore_0 && opc <= op::astore_3)) {
      uint8_t base = opc >= op::istore_0 ? (opc - op::istore_0) / 4 + op::istore
                                         : opc;
      int slots = (base == op::lstore || base == op::dstore) ? 2 : 1;
      Provenance value = top(slots - 1);
      pop(slots);
      set_local(ins.local, value, slots);
      return true;
    }

    // Array element access.
    if (opc >= op::iaload && opc <= op::saload) {
      int slots = (opc == op::laload || opc == op::daload) ? 2 : 1;
      pop(2);
      push_slots(slots, Provenance::unknown());
      return true;
    }
    if (opc >= op::iastore && opc <= op::sastore) {
      int slots = (opc == op::lastore || opc == op::dastore) ? 2 : 1;
      pop(2 + slots);
      return true;
    }

    // Raw stack manipulation; slot-based, so category-2 values just work.
    switch (opc) {
      case op::pop: pop(1); return true;
      case op::pop2: pop(2); return true;
      case op::dup: push(top(0)); return true;
      case op::dup_x1: {
        Provenance a = top(0);
        s.stack.insert(s.stack.end() - 2, a);
        return true;
      }
      case op::dup_x2: {
        if (s.stack.size() < 3) throw SimBail{};
        Provenance a = top(0);
        s.stack.insert(s.stack.end() - 3, a);
        return true;
      }
      case op::dup2: {
        Provenance a = top(0), b = top(1);
        push(b);
        push(a);
        return true;
      }
      case op::dup2_x1: {
        if (s.stack.size() < 3) throw SimBail{};
        Provenance a = top(0), b = top(1);
        s.stack.insert(s.stack.end() - 3, {b, a});
        return true;
      }
      case op::dup2_x2: {
        if (s.stack.size() < 4) throw SimBail{};
        Provenance a = top(0), b = top(1);
        s.stack.insert(s.stack.end() - 4, {b, a});
        return true;
      }
      case op::swap: {
        std::swap(top(0), top(1));
        return true;
      }
      default: break;
    }

    // Arithmetic / conversions / comparisons: provenance is dropped.
    if (opc >= op::iadd && opc <= op::dcmpg) {
      struct Effect { int pops, pushes; };
      auto effect = [&]() -> Effect {
        switch (opc) {
          case op::iadd: case op::fadd: case op::isub: case op::fsub:
          case op::imul: case op::fmul: case op::idiv: case op::fdiv:
          case op::irem: case op::frem:
            return {2, 1};
          case op::ladd: case op::dadd: case op::lsub: case op::dsub:
          case op::lmul: case op::dmul: case op::ldiv_: case op::ddiv:
          case op::lrem: case op::drem:
            return {4, 2};
          case op::ineg: case op::fneg: return {1, 1};
          case op::lneg: case op::dneg: return {2, 2};
          case op::ishl: case op::ishr: case op::iushr: return {2, 1};
          case op::lshl: case op::lshr: case op::lushr: return {3, 2};
          case op::iand: case op::ior: case op::ixor: return {2, 1};
          case op::land: case op::lor: case op::lxor: return {4, 2};
          case op::i2l: return {1, 2};
          case op::i2f: return {1, 1};
          case op::i2d: return {1, 2};
          case op::l2i: return {2, 1};
          case op::l2f: return {2, 1};
          case op::l2d: return {2, 2};
          case op::f2i: return {1, 1};
          case op::f2l: return {1, 2};
          case op::f2d: return {1, 2};
          case op::d2i: return {2, 1};
          case op::d2l: return {2, 2};
          case op::d2f: return {2, 1};
          case op::i2b: case op::i2c: case op::i2s: return {1, 1};
          case op::lcmp: return {4, 1};
          case op::fcmpl: case op::fcmpg: return {2, 1};
          case op::dcmpl: case op::dcmpg: return {4, 1};
          default: return {0, 0};
        }
      }();
      pop(effect.pops);
      push_slots(effect.pushes, Provenance::unknown());
      return true;
    }

    if (opc == op::iinc) return true;

    // Branches.
    if (opc >= op::ifeq && opc <= op::ifle) {
      pop(1);
      return true;
    }
    if (opc >= op::if_icmpeq && opc <= op::if_acmpne) {
      pop(2);
      return true;
    }
    if (opc == op::ifnull || opc == op::ifnonnull) {
      pop(1);
      return true;
    }
    if (opc == op::goto_ || opc == op::goto_w) return false;
    if (opc == op::tableswitch || opc == op::lookupswitch) {
      pop(1);
      return false;
    }

    // Returns and throw.
    if (opc == op::ireturn || opc == op::freturn || opc == op::areturn) {
      pop(1);
      return false;
    }
    if (opc == op::lreturn || opc == op::dreturn) {
      pop(2);
      return false;
    }
    if (opc == op::return_) return false;
    if (opc == op::athrow) {
      pop(1);
      return false;
    }

    // Fields.
    if (opc == op::getstatic) {
      push_slots(field_descriptor_slots(ins.field.descriptor),
                 Provenance::static_field_read(ins.field));
      return true;
    }
    if (opc == op::getfield) {
      pop(1);
      push_slots(field_descriptor_slots(ins.field.descriptor),
                 Provenance::field_read(ins.field));
      return true;
    }
    if (opc == op::putstatic) {
      pop(field_descriptor_slots(ins.field.descriptor));
      return true;
    }
    if (opc == op::putfield) {
      pop(field_descriptor_slots(ins.field.descriptor));
      pop(1);
      return true;
    }

    // Invocations.
    if (ins.operand == OperandKind::Invoke) {
      int args = method_arg_slots(ins.callee.descriptor);
      pop(args);
      if (ins.dispatch != Dispatch::Static && ins.dispatch != Dispatch::Dynamic) {
        pop(1);  // receiver
      }
      push_slots(method_return_slots(ins.callee.descriptor),
                 Provenance::return_of(ins.offset));
      return true;
    }

    // Object creation and type checks.
    if (opc == op::new_) {
      push(Provenance::new_instance(ins.type_name));
      return true;
    }
    if (opc == op::newarray || opc == op::anewarray) {
      pop(1);
      push(Provenance::new_instance(ins.type_name));
      return true;
    }
    if (opc == op::multianewarray) {
      pop(ins.array_dims);
      push(Provenance::new_instance(ins.type_name));
      return true;
    }
    if (opc == op::arraylength) {
      pop(1);
      push(Provenance::unknown());
      return true;
    }
    if (opc == op::checkcast) {
      return true;  // identity-preserving
    }
    if (opc == op::instanceof_) {
      pop(1);
      push(Provenance::unknown());
      return true;
    }
    if (opc == op::monitorenter || opc == op::monitorexit) {
      pop(1);
      return true;
    }

    return true;  // unrecognized but operand-free
  }

  // Reads records off the converged entry states.
  SimResult collect() {
    SimResult result;
    for (const auto& ins : m_.instructions) {
      auto it = entry_.find(ins.offset);
      if (it == entry_.end() || !it->second.valid) continue;
      const State& s = it->second;
      auto stack_at = [&](size_t depth_from_top) -> Provenance {
        if (s.stack.size() <= depth_from_top) return Provenance::unknown();
        return s.stack[s.stack.size() - 1 - depth_from_top];
      };

      if (ins.operand == OperandKind::Invoke &&
          ins.dispatch != Dispatch::Static &&
          ins.dispatch != Dispatch::Dynamic) {
        size_t args = method_arg_slots(ins.callee.descriptor);
        result.call_receivers[ins.offset] = stack_at(args);
      } else if (ins.opcode == op::putfield) {
        FieldStore store;
        store.offset = ins.offset;
        store.field = ins.field;
        size_t value_slots = field_descriptor_slots(ins.field.descriptor);
        store.value = stack_at(value_slots - 1);
        store.receiver = stack_at(value_slots);
        result.stores.push_back(std::move(store));
      } else if (ins.opcode == op::putstatic) {
        FieldStore store;
        store.offset = ins.offset;
        store.field = ins.field;
        size_t value_slots = field_descriptor_slots(ins.field.descriptor);
        store.value = stack_at(value_slots - 1);
        store.receiver = Provenance::unknown();
        result.stores.push_back(std::move(store));
      } else if (ins.opcode == op::athrow) {
        result.throws.push_back(ThrowSite{ins.offset, stack_at(0)});
      }
    }
    return result;
  }

  // Odd flow: keep the structural records, drop all provenance.
  SimResult degraded() const {
    SimResult result;
    result.degraded = true;
    for (const auto& ins : m_.instructions) {
      if (ins.operand == OperandKind::Invoke &&
          ins.dispatch != Dispatch::Static &&
          ins.dispatch != Dispatch::Dynamic) {
        result.call_receivers[ins.offset] = Provenance::unknown();
      } else if (ins.opcode == op::putfield || ins.opcode == op::putstatic) {
        result.stores.push_back(FieldStore{ins.offset, ins.field,
                                           Provenance::unknown(),
                                           Provenance::unknown()});
      } else if (ins.opcode == op::athrow) {
        result.throws.push_back(ThrowSite{ins.offset, Provenance::unknown()});
      }
    }
    return result;
  }

  const MethodModel& m_;
  std::map<uint32_t, size_t> index_;
  std::map<uint32_t, State> entry_;
  std::set<uint32_t> worklist_;
};

}  // namespace

SimResult simulate_receivers(const MethodModel& m) {
  if (!m.has_body()) return {};
  return Simulator(m).run();
}

}  // namespace testmap
