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
// In-memory model of parsed JVM class files: just the members, code,
// line numbers and exception data the analyses need.

#ifndef TESTMAP_CLASSFILE_HPP_
#define TESTMAP_CLASSFILE_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace testmap {

// Member access and property flags (tables 4.1/4.5/4.6 of the format).
namespace acc {
inline constexpr uint16_t kPublic = 0x0001;
inline constexpr uint16_t kPrivate = 0x0002;
inline constexpr uint16_t kProtected = 0x0004;
inline constexpr uint16_t kStatic = 0x0008;
inline constexpr uint16_t kFinal = 0x0010;
inline constexpr uint16_t kBridge = 0x0040;
inline constexpr uint16_t kNative = 0x0100;
inline constexpr uint16_t kInterface = 0x0200;
inline constexpr uint16_t kAbstract = 0x0400;
inline constexpr uint16_t kSynthetic = 0x1000;
}  // namespace acc

// Globally unique method identity: owner internal name + name + descriptor.
struct MethodId {
  std::string owner;
  std::string name;
  std::string descriptor;

  auto operator<=>(const MethodId&) const = default;
  bool operator==(const MethodId&) const = default;

  // "owner.name:descriptor", the form used in reports and diagnostics.
  std::string display() const { return owner + "." + name + descriptor; }
};

// A field reference as it appears at a use site.
struct FieldRef {
  std::string owner;
  std::string name;
  std::string descriptor;
  bool is_static = false;

  auto operator<=>(const FieldRef&) const = default;
  bool operator==(const FieldRef&) const = default;

  std::string display() const { return owner + "." + name; }
};

enum class Dispatch { Static, Special, Virtual, Interface, Dynamic };

enum class OperandKind {
  None,       // no operand the analysis cares about
  Local,      // local-variable load/store, ret
  Field,      // get/put field or static
  Invoke,     // any invocation
  Branch,     // conditional or unconditional jump (single target)
  Switch,     // table/lookup switch
  Type,       // new, anewarray, checkcast, instanceof, multianewarray
  Iinc,       // local increment
  Const,      // ldc family, bipush/sipush (category recorded)
};

struct SwitchCase {
  int32_t key = 0;
  uint32_t target = 0;
  auto operator<=>(const SwitchCase&) const = default;
};

struct Instruction {
  uint32_t offset = 0;
  uint8_t opcode = 0;
  OperandKind operand = OperandKind::None;

  uint16_t local = 0;                  // Local, Iinc
  int32_t iinc_delta = 0;              // Iinc
  FieldRef field;                      // Field
  MethodId callee;                     // Invoke
  Dispatch dispatch = Dispatch::Static;
  uint32_t branch_target = 0;          // Branch
  uint32_t switch_default = 0;         // Switch
  std::vector<SwitchCase> switch_cases;
  std::string type_name;               // Type
  uint8_t const_cat = 1;               // Const: 1 or 2 stack slots
  uint8_t array_dims = 0;              // multianewarray

  bool is_invoke() const { return operand == OperandKind::Invoke; }
};

struct ExceptionHandler {
  uint32_t start_pc = 0;   // inclusive
  uint32_t end_pc = 0;     // exclusive
  uint32_t handler_pc = 0;
  std::string catch_type;  // internal name; empty = catch-all
};

struct LineEntry {
  uint32_t start_pc = 0;
  uint32_t line = 0;
};

struct MethodModel {
  MethodId id;
  uint16_t access_flags = 0;
  std::vector<Instruction> instructions;
  std::vector<ExceptionHandler> exception_table;
  std::vector<LineEntry> line_table;
  bool has_line_table = false;
  std::vector<std::string> declared_exceptions;
  uint16_t max_stack = 0;
  uint16_t max_locals = 0;

  bool is_static() const { return access_flags & acc::kStatic; }
  bool is_abstract() const { return access_flags & acc::kAbstract; }
  bool is_native() const { return access_flags & acc::kNative; }
  bool is_synthetic() const { return access_flags & acc::kSynthetic; }
  bool is_bridge() const { return access_flags & acc::kBridge; }
  bool is_private() const { return access_flags & acc::kPrivate; }
  bool has_body() const { return !is_abstract() && !is_native(); }

  // First entry of the line table, 0 when unavailable.
  uint32_t first_line() const;
};

struct FieldModel {
  std::string name;
  std::string descriptor;
  uint16_t access_flags = 0;

  bool is_static() const { return access_flags & acc::kStatic; }
  bool is_final() const { return access_flags & acc::kFinal; }
  bool is_private() const { return access_flags & acc::kPrivate; }
};

enum class InputRole { Application, Dependency };

struct ClassOrigin {
  std::string input_path;    // path as given on the command line
  std::string archive_entry; // entry inside a jar; empty for loose files
};

struct ClassModel {
  std::string internal_name;
  std::optional<std::string> super_name;
  std::vector<std::string> interfaces;
  uint16_t access_flags = 0;
  std::vector<FieldModel> fields;
  std::vector<MethodModel> methods;
  std::optional<std::string> source_file;
  uint16_t major_version = 0;
  ClassOrigin origin;
  InputRole role = InputRole::Application;

  bool is_interface() const { return access_flags & acc::kInterface; }
  bool is_abstract() const { return access_flags & acc::kAbstract; }
  bool is_final() const { return access_flags & acc::kFinal; }
  bool is_concrete() const { return !is_interface() && !is_abstract(); }

  const FieldModel* find_field(const std::string& name) const;
  const MethodModel* find_method(const std::string& name,
                                 const std::string& descriptor) const;

  // "com/example" part of the internal name; empty for the default package.
  std::string package() const;
};

struct ParseOptions {
  // Highest accepted class-file major version. The default covers every
  // version the instruction and constant-pool grammar here is written for.
  uint16_t max_major_version = 69;
};

// Parses one class file. Throws MalformedClass / UnsupportedVersion.
// Pure: identical bytes produce structurally identical models.
ClassModel parse_class(std::span<const uint8_t> bytes,
                       const ParseOptions& options = {});

// Source lines of a method: count of distinct entries in the line table;
// without a line table, ceil(instruction count / 4); 0 for abstract/native.
uint32_t method_loc(const MethodModel& m);

// --- descriptor utilities ---

bool is_valid_field_descriptor(const std::string& d);
bool is_valid_method_descriptor(const std::string& d);

// Stack slots taken by one value of field-descriptor type (2 for J/D).
int field_descriptor_slots(const std::string& d);

// Argument slot count of a method descriptor (long/double take two).
int method_arg_slots(const std::string& descriptor);

// Slots pushed by the return value: 0 (void), 1, or 2.
int method_return_slots(const std::string& descriptor);

bool method_returns_void(const std::string& descriptor);

// Per-argument field descriptors, left to right.
std::vector<std::string> method_arg_types(const std::string& descriptor);

// Dotted form of an internal name: "java/util/Map$Entry" -> "java.util.Map$Entry".
std::string dotted_name(const std::string& internal_name);

}  // namespace testmap

#endif  // TESTMAP_CLASSFILE_HPP_
