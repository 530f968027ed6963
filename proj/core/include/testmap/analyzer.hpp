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
// Full analysis pipeline: load, hierarchy, call graph, knowledge base,
// mockability, observability, classification, report.

#ifndef TESTMAP_ANALYZER_HPP_
#define TESTMAP_ANALYZER_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "testmap/classify.hpp"
#include "testmap/hierarchy.hpp"
#include "testmap/knowledge.hpp"
#include "testmap/mockability.hpp"
#include "testmap/observability.hpp"
#include "testmap/pool.hpp"
#include "testmap/report.hpp"

namespace testmap {

struct AnalyzeOptions {
  std::optional<std::string> kb_path;
  int threads = 1;
  ParseOptions parse;
  InjectabilityOptions injectability;
};

struct AnalysisResult {
  ClassPool pool;
  std::vector<Diagnostic> diagnostics;
  TypeHierarchy hierarchy;
  CallGraph graph;
  KnowledgeBase kb;
  std::map<MethodId, SimResult> sims;
  MockabilityResult mockability;
  std::set<MethodId> non_observable;
  std::map<MethodId, MethodClassification> classifications;
  Report report;
};

// Runs the whole pipeline. Deterministic: the report is byte-identical for
// the same inputs and options regardless of the thread count.
AnalysisResult analyze(const std::vector<InputSpec>& inputs,
                       const AnalyzeOptions& options = {});

}  // namespace testmap

#endif  // TESTMAP_ANALYZER_HPP_
