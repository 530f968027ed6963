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

#include "testmap/metrics.hpp"

#include <set>

#include "testmap/opcodes.hpp"

namespace testmap {

const char* trivial_kind_key(TrivialKind k) {
  switch (k) {
    case TrivialKind::None: return "";
    case TrivialKind::Getter: return "getter";
    case TrivialKind::Setter: return "setter";
    case TrivialKind::Empty: return "empty";
    case TrivialKind::ConstantReturn: return "constant-return";
    case TrivialKind::ParamAssignConstructor: return "param-assign-constructor";
  }
  return "";
}

namespace {

bool is_load_this(const Instruction& ins) {
  return ins.opcode == op::aload_0 ||
         (ins.opcode == op::aload && ins.local == 0);
}

bool is_param_load(const Instruction& ins) {
  // Any local load with index >= 1; in the trivial patterns locals are never
  // written, so every such load reads a parameter.
  if (ins.operand != OperandKind::Local) return false;
  uint8_t opc = ins.opcode;
  bool load = (opc >= op::iload && opc <= op::aload) ||
              (opc >= op::iload_0 && opc <= op::aload_3);
  return load && ins.local >= 1;
}

bool is_value_return(uint8_t opc) {
  return opc >= op::ireturn && opc <= op::areturn;
}

bool is_const_push(const Instruction& ins) {
  return (ins.opcode >= op::aconst_null && ins.opcode <= op::dconst_1) ||
         ins.operand == OperandKind::Const;
}

// Instruction list with nops removed.
std::vector<const Instruction*> significant(const MethodModel& m) {
  std::vector<const Instruction*> out;
  for (const auto& ins : m.instructions) {
    if (ins.opcode != op::nop) out.push_back(&ins);
  }
  return out;
}

bool match_getter(const std::vector<const Instruction*>& b,
                  TrivialityVerdict& v) {
  if (b.size() != 3) return false;
  if (!is_load_this(*b[0])) return false;
  if (b[1]->opcode != op::getfield) return false;
  if (!is_value_return(b[2]->opcode)) return false;
  v.kind = TrivialKind::Getter;
  v.accessed_field = b[1]->field;
  return true;
}

bool match_setter(const std::vector<const Instruction*>& b,
                  TrivialityVerdict& v) {
  if (b.size() != 4) return false;
  if (!is_load_this(*b[0])) return false;
  if (!is_param_load(*b[1])) return false;
  if (b[2]->opcode != op::putfield) return false;
  if (b[3]->opcode != op::return_) return false;
  v.kind = TrivialKind::Setter;
  v.accessed_field = b[2]->field;
  return true;
}

bool match_empty(const std::vector<const Instruction*>& b,
                 TrivialityVerdict& v) {
  if (b.size() != 1 || b[0]->opcode != op::return_) return false;
  v.kind = TrivialKind::Empty;
  return true;
}

bool match_constant_return(const std::vector<const Instruction*>& b,
                           TrivialityVerdict& v) {
  if (b.size() != 2) return false;
  if (!is_const_push(*b[0])) return false;
  if (!is_value_return(b[1]->opcode)) return false;
  v.kind = TrivialKind::ConstantReturn;
  return true;
}

// Superclass constructor call, then only parameter-to-field assignments.
// The super call may forward parameter loads; any other invocation (boxing
// helpers included) disqualifies.
bool match_param_assign_ctor(const MethodModel& m,
                             const std::vector<const Instruction*>& b,
                             TrivialityVerdict& v) {
  if (m.id.name != "<init>") return false;
  size_t i = 0;
  if (i >= b.size() || !is_load_this(*b[i])) return false;
  ++i;
  while (i < b.size() && is_param_load(*b[i])) ++i;
  if (i >= b.size() || b[i]->opcode != op::invokespecial ||
      b[i]->callee.name != "<init>") {
    return false;
  }
  ++i;
  while (i < b.size() && b[i]->opcode != op::return_) {
    if (i + 2 >= b.size()) return false;
    if (!is_load_this(*b[i])) return false;
    if (!is_param_load(*b[i + 1])) return false;
    if (b[i + 2]->opcode != op::putfield) return false;
    i += 3;
  }
  if (i != b.size() - 1 || b[i]->opcode != op::return_) return false;
  v.kind = TrivialKind::ParamAssignConstructor;
  return true;
}

}  // namespace

TrivialityVerdict detect_trivial(const MethodModel& m) {
  TrivialityVerdict v;
  if (!m.has_body()) return v;
  auto body = significant(m);
  if (body.empty()) return v;

  if (match_empty(body, v) || match_getter(body, v) || match_setter(body, v) ||
      match_constant_return(body, v) || match_param_assign_ctor(m, body, v)) {
    v.is_trivial = true;
  }
  return v;
}

uint32_t cyclomatic_complexity(const MethodModel& m) {
  uint32_t cc = 1;
  for (const auto& ins : m.instructions) {
    uint8_t opc = ins.opcode;
    bool conditional = (opc >= op::ifeq && opc <= op::if_acmpne) ||
                       opc == op::ifnull || opc == op::ifnonnull;
    if (conditional) {
      ++cc;
    } else if (ins.operand == OperandKind::Switch) {
      // Distinct case targets; entries that just jump to the default
      // (tableswitch range padding) are not decisions.
      std::set<uint32_t> targets;
      for (const auto& c : ins.switch_cases) {
        if (c.target != ins.switch_default) targets.insert(c.target);
      }
      cc += static_cast<uint32_t>(targets.size());
    }
  }
  return cc;
}

}  // namespace testmap
