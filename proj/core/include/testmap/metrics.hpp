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

#ifndef TESTMAP_METRICS_HPP_
#define TESTMAP_METRICS_HPP_

#include <cstdint>

#include "testmap/classfile.hpp"

namespace testmap {

enum class TrivialKind {
  None,
  Getter,
  Setter,
  Empty,
  ConstantReturn,
  ParamAssignConstructor,
};

const char* trivial_kind_key(TrivialKind k);

struct TrivialityVerdict {
  bool is_trivial = false;
  TrivialKind kind = TrivialKind::None;
  // For Getter: the field that is read (used by observability).
  FieldRef accessed_field;
};

// Pattern match over the instruction sequence, no-ops ignored. Requires a
// body. Anything with extra calls (boxing helpers included) is not trivial.
TrivialityVerdict detect_trivial(const MethodModel& m);

// 1 + conditional branches + per-switch distinct non-default case targets.
// Exception handlers do not count. Requires a body.
uint32_t cyclomatic_complexity(const MethodModel& m);

}  // namespace testmap

#endif  // TESTMAP_METRICS_HPP_
