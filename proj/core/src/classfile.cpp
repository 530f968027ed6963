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
// Class-file parsing: constant pool, members, and full bytecode decoding of
// the Code attribute. Attributes the analysis does not need are skipped.

#include "testmap/classfile.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bytes.hpp"
#include "testmap/errors.hpp"
#include "testmap/opcodes.hpp"

namespace testmap {

uint32_t MethodModel::first_line() const {
  return line_table.empty() ? 0 : line_table.front().line;
}

const FieldModel* ClassModel::find_field(const std::string& name) const {
  for (const auto& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const MethodModel* ClassModel::find_method(const std::string& name,
                                           const std::string& descriptor) const {
  for (const auto& m : methods) {
    if (m.id.name == name && m.id.descriptor == descriptor) return &m;
  }
  return nullptr;
}

std::string ClassModel::package() const {
  size_t slash = internal_name.rfind('/');
  return slash == std::string::npos ? std::string()
                                    : internal_name.substr(0, slash);
}

namespace {

enum CpTag : uint8_t {
  kUtf8 = 1,
  kInteger = 3,
  kFloat = 4,
  kLong = 5,
  kDouble = 6,
  kClass = 7,
  kString = 8,
  kFieldref = 9,
  kMethodref = 10,
  kInterfaceMethodref = 11,
  kNameAndType = 12,
  kMethodHandle = 15,
  kMethodType = 16,
  kDynamic = 17,
  kInvokeDynamic = 18,
  kModule = 19,
  kPackage = 20,
};

struct CpEntry {
  uint8_t tag = 0;
  std::string utf8;
  uint16_t ref1 = 0;  // Class.name / ref.class / NameAndType.name / String
  uint16_t ref2 = 0;  // ref.name_and_type / NameAndType.descriptor
};

class ConstantPool {
 public:
  explicit ConstantPool(ByteReader& r) {
    uint16_t count = r.u2();
    entries_.resize(count);  // slot 0 unused
    for (uint16_t i = 1; i < count; ++i) {
      CpEntry& e = entries_[i];
      e.tag = r.u1();
      switch (e.tag) {
        case kUtf8: {
          uint16_t len = r.u2();
          e.utf8 = r.bytes(len);
          break;
        }
        case kInteger:
        case kFloat:
          r.skip(4);
          break;
        case kLong:
        case kDouble:
          r.skip(8);
          ++i;  // takes two slots
          break;
        case kClass:
        case kString:
        case kMethodType:
        case kModule:
        case kPackage:
          e.ref1 = r.u2();
          break;
        case kFieldref:
        case kMethodref:
        case kInterfaceMethodref:
        case kNameAndType:
        case kDynamic:
        case kInvokeDynamic:
          e.ref1 = r.u2();
          e.ref2 = r.u2();
          break;
        case kMethodHandle:
          r.skip(1);
          e.ref1 = r.u2();
          break;
        default:
          throw MalformedClass("unknown constant pool tag " +
                               std::to_string(e.tag) + " at index " +
                               std::to_string(i));
      }
    }
  }

  const CpEntry& at(uint16_t index, uint8_t expected_tag) const {
    const CpEntry& e = at(index);
    if (e.tag != expected_tag) {
      throw MalformedClass("constant pool index " + std::to_string(index) +
                           " has tag " + std::to_string(e.tag) + ", expected " +
                           std::to_string(expected_tag));
    }
    return e;
  }

  const CpEntry& at(uint16_t index) const {
    if (index == 0 || index >= entries_.size() || entries_[index].tag == 0) {
      throw MalformedClass("dangling constant pool index " +
                           std::to_string(index));
    }
    return entries_[index];
  }

  std::string utf8(uint16_t index) const { return at(index, kUtf8).utf8; }

  std::string class_name(uint16_t index) const {
    return utf8(at(index, kClass).ref1);
  }

  std::pair<std::string, std::string> name_and_type(uint16_t index) const {
    const CpEntry& e = at(index, kNameAndType);
    return {utf8(e.ref1), utf8(e.ref2)};
  }

  FieldRef field_ref(uint16_t index, bool is_static) const {
    const CpEntry& e = at(index, kFieldref);
    auto [name, desc] = name_and_type(e.ref2);
    if (!is_valid_field_descriptor(desc)) {
      throw MalformedClass("invalid field descriptor '" + desc + "'");
    }
    return FieldRef{class_name(e.ref1), name, desc, is_static};
  }

  MethodId method_ref(uint16_t index) const {
    const CpEntry& e = at(index);
    if (e.tag != kMethodref && e.tag != kInterfaceMethodref) {
      throw MalformedClass("constant pool index " + std::to_string(index) +
                           " is not a method reference");
    }
    auto [name, desc] = name_and_type(e.ref2);
    if (!is_valid_method_descriptor(desc)) {
      throw MalformedClass("invalid method descriptor '" + desc + "'");
    }
    return MethodId{class_name(e.ref1), name, desc};
  }

  MethodId dynamic_callee(uint16_t index) const {
    const CpEntry& e = at(index, kInvokeDynamic);
    auto [name, desc] = name_and_type(e.ref2);
    if (!is_valid_method_descriptor(desc)) {
      throw MalformedClass("invalid method descriptor '" + desc + "'");
    }
    // No owner class: the call site is linked at run time.
    return MethodId{"", name, desc};
  }

 private:
  std::vector<CpEntry> entries_;
};

std::vector<Instruction> decode_code(std::span<const uint8_t> code,
                                     const ConstantPool& cp,
                                     const std::string& where) {
  std::vector<Instruction> out;
  ByteReader r(code, where);
  while (!r.at_end()) {
    Instruction ins;
    ins.offset = static_cast<uint32_t>(r.pos());
    ins.opcode = r.u1();
    uint8_t opc = ins.opcode;

    auto rel_target = [&](int32_t delta) {
      return static_cast<uint32_t>(static_cast<int64_t>(ins.offset) + delta);
    };

    if (opc == op::bipush) {
      ins.operand = OperandKind::Const;
      r.skip(1);
    } else if (opc == op::sipush) {
      ins.operand = OperandKind::Const;
      r.skip(2);
    } else if (opc == op::ldc) {
      ins.operand = OperandKind::Const;
      cp.at(r.u1());
    } else if (opc == op::ldc_w) {
      ins.operand = OperandKind::Const;
      cp.at(r.u2());
    } else if (opc == op::ldc2_w) {
      ins.operand = OperandKind::Const;
      ins.const_cat = 2;
      cp.at(r.u2());
    } else if (opc >= op::iload && opc <= op::aload) {
      ins.operand = OperandKind::Local;
      ins.local = r.u1();
    } else if (opc >= op::iload_0 && opc <= op::aload_3) {
      ins.operand = OperandKind::Local;
      ins.local = (opc - op::iload_0) % 4;
    } else if (opc >= op::istore && opc <= op::astore) {
      ins.operand = OperandKind::Local;
      ins.local = r.u1();
    } else if (opc >= op::istore_0 && opc <= op::astore_3) {
      ins.operand = OperandKind::Local;
      ins.local = (opc - op::istore_0) % 4;
    } else if (opc == op::iinc) {
      ins.operand = OperandKind::Iinc;
      ins.local = r.u1();
      ins.iinc_delta = static_cast<int8_t>(r.u1());
    } else if ((opc >= op::ifeq && opc <= op::jsr) || opc == op::ifnull ||
               opc == op::ifnonnull) {
      ins.operand = OperandKind::Branch;
      ins.branch_target = rel_target(r.s2());
    } else if (opc == op::goto_w || opc == op::jsr_w) {
      ins.operand = OperandKind::Branch;
      ins.branch_target = rel_target(r.s4());
    } else if (opc == op::ret) {
      ins.operand = OperandKind::Local;
      ins.local = r.u1();
    } else if (opc == op::tableswitch) {
      ins.operand = OperandKind::Switch;
      while (r.pos() % 4 != 0) r.skip(1);
      ins.switch_default = rel_target(r.s4());
      int32_t lo = r.s4();
      int32_t hi = r.s4();
      if (hi < lo) throw MalformedClass("tableswitch hi < lo in " + where);
      int64_t n = static_cast<int64_t>(hi) - lo + 1;
      if (n > static_cast<int64_t>(code.size())) {
        throw MalformedClass("oversized tableswitch in " + where);
      }
      for (int64_t k = 0; k < n; ++k) {
        ins.switch_cases.push_back(
            {static_cast<int32_t>(lo + k), rel_target(r.s4())});
      }
    } else if (opc == op::lookupswitch) {
      ins.operand = OperandKind::Switch;
      while (r.pos() % 4 != 0) r.skip(1);
      ins.switch_default = rel_target(r.s4());
      int32_t npairs = r.s4();
      if (npairs < 0 || npairs > static_cast<int32_t>(code.size())) {
        throw MalformedClass("bad lookupswitch pair count in " + where);
      }
      for (int32_t k = 0; k < npairs; ++k) {
        int32_t key = r.s4();
        ins.switch_cases.push_back({key, rel_target(r.s4())});
      }
    } else if (opc >= op::getstatic && opc <= op::putfield) {
      ins.operand = OperandKind::Field;
      bool is_static = opc == op::getstatic || opc == op::putstatic;
      ins.field = cp.field_ref(r.u2(), is_static);
    } else if (opc >= op::invokevirtual && opc <= op::invokedynamic) {
      ins.operand = OperandKind::Invoke;
      uint16_t index = r.u2();
      switch (opc) {
        case op::invokevirtual:
          ins.dispatch = Dispatch::Virtual;
          ins.callee = cp.method_ref(index);
          break;
        case op::invokespecial:
          ins.dispatch = Dispatch::Special;
          ins.callee = cp.method_ref(index);
          break;
        case op::invokestatic:
          ins.dispatch = Dispatch::Static;
          ins.callee = cp.method_ref(index);
          break;
        case op::invokeinterface:
          ins.dispatch = Dispatch::Interface;
          ins.callee = cp.method_ref(index);
          r.skip(2);  // count + zero
          break;
        case op::invokedynamic:
          ins.dispatch = Dispatch::Dynamic;
          ins.callee = cp.dynamic_callee(index);
          r.skip(2);  // two zero bytes
          break;
      }
    } else if (opc == op::new_ || opc == op::anewarray || opc == op::checkcast ||
               opc == op::instanceof_) {
      ins.operand = OperandKind::Type;
      ins.type_name = cp.class_name(r.u2());
    } else if (opc == op::multianewarray) {
      ins.operand = OperandKind::Type;
      ins.type_name = cp.class_name(r.u2());
      ins.array_dims = r.u1();
    } else if (opc == op::newarray) {
      ins.operand = OperandKind::Type;
      uint8_t atype = r.u1();
      ins.type_name = "[primitive:" + std::to_string(atype) + "]";
    } else if (opc == op::wide) {
      uint8_t inner = r.u1();
      ins.opcode = inner;
      if (inner == op::iinc) {
        ins.operand = OperandKind::Iinc;
        ins.local = r.u2();
        ins.iinc_delta = r.s2();
      } else if ((inner >= op::iload && inner <= op::aload) ||
                 (inner >= op::istore && inner <= op::astore) ||
                 inner == op::ret) {
        ins.operand = OperandKind::Local;
        ins.local = r.u2();
      } else {
        throw MalformedClass("invalid wide opcode " + std::to_string(inner) +
                             " in " + where);
      }
    } else if (opc > op::jsr_w) {
      throw MalformedClass("unknown opcode " + std::to_string(opc) + " in " +
                           where);
    }
    // Everything else has no operand bytes.
    out.push_back(std::move(ins));
  }
  return out;
}

void validate_branch_targets(const std::vector<Instruction>& instructions,
                             const std::string& where) {
  std::set<uint32_t> offsets;
  for (const auto& ins : instructions) offsets.insert(ins.offset);
  auto check = [&](uint32_t target) {
    if (!offsets.count(target)) {
      throw MalformedClass("branch target " + std::to_string(target) +
                           " is not an instruction offset in " + where);
    }
  };
  for (const auto& ins : instructions) {
    if (ins.operand == OperandKind::Branch) {
      check(ins.branch_target);
    } else if (ins.operand == OperandKind::Switch) {
      check(ins.switch_default);
      for (const auto& c : ins.switch_cases) check(c.target);
    }
  }
}

void parse_code_attribute(ByteReader& r, const ConstantPool& cp,
                          MethodModel& method, const std::string& where) {
  method.max_stack = r.u2();
  method.max_locals = r.u2();
  uint32_t code_length = r.u4();
  std::string code = r.bytes(code_length);
  method.instructions = decode_code(
      std::span<const uint8_t>(
          reinterpret_cast<const uint8_t*>(code.data()), code.size()),
      cp, where);
  validate_branch_targets(method.instructions, where);

  uint16_t handlers = r.u2();
  for (uint16_t i = 0; i < handlers; ++i) {
    ExceptionHandler h;
    h.start_pc = r.u2();
    h.end_pc = r.u2();
    h.handler_pc = r.u2();
    uint16_t type_index = r.u2();
    if (type_index != 0) h.catch_type = cp.class_name(type_index);
    method.exception_table.push_back(std::move(h));
  }

  uint16_t attr_count = r.u2();
  for (uint16_t i = 0; i < attr_count; ++i) {
    std::string name = cp.utf8(r.u2());
    uint32_t length = r.u4();
    if (name == "LineNumberTable") {
      uint16_t entries = r.u2();
      for (uint16_t k = 0; k < entries; ++k) {
        LineEntry e;
        e.start_pc = r.u2();
        e.line = r.u2();
        method.line_table.push_back(e);
      }
      method.has_line_table = true;
    } else {
      r.skip(length);
    }
  }
}

}  // namespace

ClassModel parse_class(std::span<const uint8_t> bytes,
                       const ParseOptions& options) {
  ByteReader r(bytes, "class file");
  if (r.u4() != 0xCAFEBABEu) {
    throw MalformedClass("bad magic number");
  }
  r.u2();  // minor version
  uint16_t major = r.u2();
  if (major < 45) {
    throw MalformedClass("implausible major version " + std::to_string(major));
  }
  if (major > options.max_major_version) {
    throw UnsupportedVersion("class file major version " +
                             std::to_string(major) + " exceeds the cap of " +
                             std::to_string(options.max_major_version));
  }

  ConstantPool cp(r);

  ClassModel cls;
  cls.major_version = major;
  cls.access_flags = r.u2();
  cls.internal_name = cp.class_name(r.u2());
  if (cls.internal_name.empty()) {
    throw MalformedClass("empty class name");
  }
  uint16_t super_index = r.u2();
  if (super_index != 0) cls.super_name = cp.class_name(super_index);

  uint16_t interface_count = r.u2();
  for (uint16_t i = 0; i < interface_count; ++i) {
    cls.interfaces.push_back(cp.class_name(r.u2()));
  }

  uint16_t field_count = r.u2();
  for (uint16_t i = 0; i < field_count; ++i) {
    FieldModel f;
    f.access_flags = r.u2();
    f.name = cp.utf8(r.u2());
    f.descriptor = cp.utf8(r.u2());
    if (!is_valid_field_descriptor(f.descriptor)) {
      throw MalformedClass("invalid descriptor of field " + cls.internal_name +
                           "." + f.name);
    }
    uint16_t attr_count = r.u2();
    for (uint16_t k = 0; k < attr_count; ++k) {
      cp.utf8(r.u2());
      r.skip(r.u4());
    }
    cls.fields.push_back(std::move(f));
  }

  uint16_t method_count = r.u2();
  for (uint16_t i = 0; i < method_count; ++i) {
    MethodModel m;
    m.access_flags = r.u2();
    m.id.owner = cls.internal_name;
    m.id.name = cp.utf8(r.u2());
    m.id.descriptor = cp.utf8(r.u2());
    if (!is_valid_method_descriptor(m.id.descriptor)) {
      throw MalformedClass("invalid descriptor of method " + m.id.display());
    }
    std::string where = m.id.display();
    uint16_t attr_count = r.u2();
    for (uint16_t k = 0; k < attr_count; ++k) {
      std::string name = cp.utf8(r.u2());
      uint32_t length = r.u4();
      if (name == "Code" && m.has_body()) {
        parse_code_attribute(r, cp, m, where);
      } else if (name == "Exceptions") {
        uint16_t n = r.u2();
        for (uint16_t e = 0; e < n; ++e) {
          m.declared_exceptions.push_back(cp.class_name(r.u2()));
        }
      } else {
        r.skip(length);
      }
    }
    cls.methods.push_back(std::move(m));
  }

  uint16_t attr_count = r.u2();
  for (uint16_t i = 0; i < attr_count; ++i) {
    std::string name = cp.utf8(r.u2());
    uint32_t length = r.u4();
    if (name == "SourceFile") {
      cls.source_file = cp.utf8(r.u2());
    } else {
      r.skip(length);
    }
  }

  return cls;
}

uint32_t method_loc(const MethodModel& m) {
  if (!m.has_body()) return 0;
  if (m.has_line_table && !m.line_table.empty()) {
    std::set<uint32_t> lines;
    for (const auto& e : m.line_table) lines.insert(e.line);
    return static_cast<uint32_t>(lines.size());
  }
  return static_cast<uint32_t>((m.instructions.size() + 3) / 4);
}

}  // namespace testmap
