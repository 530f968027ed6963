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

#include <benchmark/benchmark.h>

#include <filesystem>

#include "support/corpora.hpp"
#include "testmap/analyzer.hpp"
#include "testmap/metrics.hpp"
#include "testmap/mockability.hpp"
#include "testmap/treemap.hpp"

namespace {

using namespace testmap;
using namespace testmap::fixtures;

const FixtureSet& bench_corpus() {
  static FixtureSet set = synthetic_corpus(64, 7);
  return set;
}

void BM_ParseClass(benchmark::State& state) {
  const auto& bytes = bench_corpus().classes.front().second;
  for (auto _ : state) {
    ClassModel model = parse_class(bytes);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_ParseClass);

void BM_SimulateReceivers(benchmark::State& state) {
  ClassModel model = parse_class(bench_corpus().classes.front().second);
  for (auto _ : state) {
    for (const auto& m : model.methods) {
      if (!m.has_body()) continue;
      SimResult sim = simulate_receivers(m);
      benchmark::DoNotOptimize(sim);
    }
  }
}
BENCHMARK(BM_SimulateReceivers);

void BM_CyclomaticComplexity(benchmark::State& state) {
  ClassModel model = parse_class(bench_corpus().classes.front().second);
  for (auto _ : state) {
    for (const auto& m : model.methods) {
      if (!m.has_body()) continue;
      benchmark::DoNotOptimize(cyclomatic_complexity(m));
    }
  }
}
BENCHMARK(BM_CyclomaticComplexity);

void BM_AnalyzePipeline(benchmark::State& state) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "testmap_bench_corpus";
  if (!fs::exists(dir)) {
    write_fixture_dir(synthetic_corpus(static_cast<int>(state.range(0)), 11),
                      dir.string());
  }
  AnalyzeOptions options;
  options.threads = 1;
  for (auto _ : state) {
    AnalysisResult result =
        analyze({InputSpec{dir.string(), InputRole::Application}}, options);
    benchmark::DoNotOptimize(result.report.methods.size());
  }
}
BENCHMARK(BM_AnalyzePipeline)->Arg(64);

void BM_SquarifyLayout(benchmark::State& state) {
  MapNode root;
  root.id = "root";
  for (int g = 0; g < 10; ++g) {
    MapNode group;
    group.id = "g" + std::to_string(g);
    for (int i = 0; i < 20; ++i) {
      MapNode leaf;
      leaf.id = group.id + "/m" + std::to_string(i);
      leaf.weight = 1 + (i * 7 + g * 3) % 23;
      group.weight += leaf.weight;
      group.children.push_back(std::move(leaf));
    }
    root.weight += group.weight;
    root.children.push_back(std::move(group));
  }
  for (auto _ : state) {
    auto layout = squarify_layout(root, Rect{0, 0, 1200, 800});
    benchmark::DoNotOptimize(layout);
  }
}
BENCHMARK(BM_SquarifyLayout);

}  // namespace

BENCHMARK_MAIN();
