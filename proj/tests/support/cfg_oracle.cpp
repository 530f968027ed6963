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

#include "support/cfg_oracle.hpp"

#include <deque>
#include <map>
#include <set>

#include "testmap/opcodes.hpp"

namespace testmap::fixtures {

uint32_t complexity_by_cfg(const MethodModel& m) {
  if (m.instructions.empty()) return 1;

  std::map<uint32_t, size_t> index;
  for (size_t i = 0; i < m.instructions.size(); ++i) {
    index[m.instructions[i].offset] = i;
  }
  constexpr uint32_t kExit = 0xFFFFFFFFu;

  auto successors = [&](const Instruction& ins, size_t idx) {
    std::set<uint32_t> out;
    uint8_t opc = ins.opcode;
    if ((opc >= op::ireturn && opc <= op::return_) || opc == op::athrow) {
      out.insert(kExit);
      return out;
    }
    if (ins.operand == OperandKind::Branch) {
      out.insert(ins.branch_target);
      if (opc != op::goto_ && opc != op::goto_w) {
        if (idx + 1 < m.instructions.size()) {
          out.insert(m.instructions[idx + 1].offset);
        }
      }
      return out;
    }
    if (ins.operand == OperandKind::Switch) {
      out.insert(ins.switch_default);
      for (const auto& c : ins.switch_cases) out.insert(c.target);
      return out;
    }
    if (idx + 1 < m.instructions.size()) {
      out.insert(m.instructions[idx + 1].offset);
    }
    return out;
  };

  // Reachable node set.
  std::set<uint32_t> nodes;
  std::deque<uint32_t> queue{m.instructions.front().offset};
  uint64_t edges = 0;
  bool exit_reached = false;
  while (!queue.empty()) {
    uint32_t offset = queue.front();
    queue.pop_front();
    if (!nodes.insert(offset).second) continue;
    const Instruction& ins = m.instructions[index.at(offset)];
    for (uint32_t succ : successors(ins, index.at(offset))) {
      ++edges;
      if (succ == kExit) {
        exit_reached = true;
      } else {
        queue.push_back(succ);
      }
    }
  }

  uint64_t node_count = nodes.size() + (exit_reached ? 1 : 0);
  return static_cast<uint32_t>(edges - node_count + 2);
}

}  // namespace testmap::fixtures
