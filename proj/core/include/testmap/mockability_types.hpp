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
// Value provenance and injectability: where an object a method operates on
// came from, and whether a test could supply it from outside.

#ifndef TESTMAP_MOCKABILITY_TYPES_HPP_
#define TESTMAP_MOCKABILITY_TYPES_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "testmap/classfile.hpp"

namespace testmap {

enum class ProvenanceKind {
  Parameter,        // loaded from a method parameter
  FieldRead,        // read from an instance field
  StaticFieldRead,  // read from a static field
  NewInstance,      // allocated in this method
  ReturnOf,         // returned by a call in this method
  ThisRef,          // the receiver object of the method itself
  CaughtException,  // pushed on entry to an exception handler
  Unknown,          // merged/untracked; consumers treat it as injectable
};

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::Unknown;
  int param_index = -1;     // Parameter
  FieldRef field;           // FieldRead / StaticFieldRead
  std::string type_name;    // NewInstance
  uint32_t call_offset = 0; // ReturnOf

  auto operator<=>(const Provenance&) const = default;
  bool operator==(const Provenance&) const = default;

  static Provenance unknown() { return {}; }
  static Provenance parameter(int index);
  static Provenance this_ref();
  static Provenance field_read(FieldRef f);
  static Provenance static_field_read(FieldRef f);
  static Provenance new_instance(std::string type);
  static Provenance return_of(uint32_t call_offset);
  static Provenance caught_exception();

  // Lattice join: equal values stay, anything else degrades to Unknown.
  static Provenance join(const Provenance& a, const Provenance& b);

  std::string display() const;
};

enum class Injectability { Injectable, NonInjectable, Unknown };

// One field store observed during simulation.
struct FieldStore {
  uint32_t offset = 0;
  FieldRef field;
  Provenance receiver;  // ThisRef/... ; Unknown kind used for static stores
  Provenance value;
};

struct ThrowSite {
  uint32_t offset = 0;
  Provenance value;
};

// Per-method result of the operand-stack/locals provenance simulation.
struct SimResult {
  // Receiver provenance per invocation offset (instance calls only).
  std::map<uint32_t, Provenance> call_receivers;
  std::vector<FieldStore> stores;
  std::vector<ThrowSite> throws;
  bool degraded = false;  // odd flow (jsr/ret, stack underflow) hit Unknown
};

}  // namespace testmap

#endif  // TESTMAP_MOCKABILITY_TYPES_HPP_
