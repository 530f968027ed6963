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

#include "testmap/analyzer.hpp"

#include <algorithm>
#include <thread>

#include "testmap/metrics.hpp"
#include "testmap/version.hpp"

namespace testmap {

namespace {

std::map<MethodId, SimResult> simulate_pool(const ClassPool& pool,
                                            int threads) {
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
  std::map<MethodId, SimResult> sims;
  for (size_t i = 0; i < methods.size(); ++i) {
    sims.emplace(methods[i]->id, std::move(slots[i]));
  }
  return sims;
}

}  // namespace

AnalysisResult analyze(const std::vector<InputSpec>& inputs,
                       const AnalyzeOptions& options) {
  AnalysisResult r;

  LoadOptions load_options;
  load_options.parse = options.parse;
  load_options.threads = options.threads;
  LoadResult loaded = load_inputs(inputs, load_options);
  r.pool = std::move(loaded.pool);
  r.diagnostics = std::move(loaded.diagnostics);
  std::sort(r.diagnostics.begin(), r.diagnostics.end());

  r.kb = load_knowledge_base(options.kb_path);
  r.hierarchy = TypeHierarchy::build(r.pool);
  r.sims = simulate_pool(r.pool, options.threads);
  r.graph = CallGraph::build(r.pool, r.hierarchy, r.sims);

  InjectabilityMap injectability =
      compute_injectability(r.pool, r.sims, options.injectability);
  r.mockability = compute_nonmockable(r.graph, r.kb, r.pool, r.hierarchy,
                                      injectability);

  ObservabilityContext obs_ctx;
  obs_ctx.pool = &r.pool;
  obs_ctx.hierarchy = &r.hierarchy;
  obs_ctx.graph = &r.graph;
  obs_ctx.kb = &r.kb;
  obs_ctx.injectability = &r.mockability.injectability;
  obs_ctx.options = options.injectability;
  r.non_observable = compute_nonobservable(r.pool, r.sims, obs_ctx);

  std::vector<MethodRecord> records;
  for (const auto& cls : r.pool.classes()) {
    for (const auto& m : cls.methods) {
      bool non_mockable = r.mockability.is_non_mockable(m.id);
      std::optional<Category> category;
      if (non_mockable) {
        category = r.mockability.verdicts.at(m.id).category;
      }
      MethodClassification classification = classify_method(
          m, non_mockable, category, r.non_observable.count(m.id) > 0);
      r.classifications[m.id] = classification;

      MethodRecord record;
      record.id = m.id;
      record.classification = classification;
      record.loc = method_loc(m);
      record.complexity = m.has_body() ? cyclomatic_complexity(m) : 0;
      record.line = m.first_line();
      record.module = module_of(cls);
      record.package = cls.package();
      records.push_back(std::move(record));
    }
  }
  std::sort(records.begin(), records.end(),
            [](const MethodRecord& a, const MethodRecord& b) {
              return a.id < b.id;
            });

  Report report;
  report.schema_version = kSchemaVersion;
  report.tool_name = kToolName;
  report.tool_version = kToolVersion;
  for (const auto& in : inputs) {
    report.inputs.push_back(ReportInput{
        in.path,
        in.role == InputRole::Application ? "application" : "dependency"});
  }
  report.kb_fingerprint = r.kb.fingerprint();
  report.diagnostics = r.diagnostics;

  for (const auto& record : records) {
    ReportMethod m;
    m.id = record.id;
    m.classification = method_class_key(record.classification.cls);
    if (record.classification.cls == MethodClass::Trivial) {
      m.trivial_kind = trivial_kind_key(record.classification.trivial_kind);
    }
    m.excluded_reason = record.classification.excluded_reason;
    for (const auto& reason : record.classification.reasons) {
      m.reasons.push_back(reason.key());
    }
    std::sort(m.reasons.begin(), m.reasons.end());
    m.loc = record.loc;
    m.complexity = record.complexity;
    m.line = record.line;
    m.module = record.module;
    m.package = record.package;

    if (r.mockability.is_non_mockable(record.id)) {
      auto diag = explain_trace(record.id, r.mockability, r.graph, r.kb,
                                r.pool, r.hierarchy);
      if (diag) {
        TraceRecord trace;
        trace.category_key = category_key(diag->category);
        if (diag->receiver_field) {
          trace.receiver_field = diag->receiver_field->display();
        }
        for (const auto& hop : diag->chain) {
          trace.chain.push_back(TraceRecord::Hop{hop.method, hop.line});
        }
        m.trace = std::move(trace);
      }
    }
    report.methods.push_back(std::move(m));
  }

  report.segmentations = aggregate_segmentation(records);
  r.report = std::move(report);
  return r;
}

}  // namespace testmap
