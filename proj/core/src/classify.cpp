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

#include "testmap/classify.hpp"

#include <algorithm>
#include <array>

namespace testmap {

const char* method_class_key(MethodClass c) {
  switch (c) {
    case MethodClass::Excluded: return "excluded";
    case MethodClass::Trivial: return "trivial";
    case MethodClass::Testable: return "testable";
    case MethodClass::NotTestable: return "not-testable";
  }
  return "?";
}

const char* scope_kind_key(ScopeKind k) {
  switch (k) {
    case ScopeKind::Repository: return "repository";
    case ScopeKind::Module: return "module";
    case ScopeKind::Package: return "package";
  }
  return "?";
}

std::string Reason::key() const {
  return observability ? "observability" : category_key(category);
}

MethodClassification classify_method(const MethodModel& m, bool non_mockable,
                                      std::optional<Category> mock_category,
                                      bool non_observable) {
  MethodClassification out;
  if (!m.has_body()) {
    out.cls = MethodClass::Excluded;
    out.excluded_reason = m.is_abstract() ? "abstract" : "native";
    return out;
  }
  if (m.is_synthetic() || m.is_bridge()) {
    out.cls = MethodClass::Excluded;
    out.excluded_reason = m.is_bridge() ? "bridge" : "synthetic";
    return out;
  }
  TrivialityVerdict triv = detect_trivial(m);
  if (triv.is_trivial) {
    out.cls = MethodClass::Trivial;
    out.trivial_kind = triv.kind;
    return out;
  }
  if (non_mockable && mock_category) {
    out.reasons.insert(Reason::of(*mock_category));
  }
  if (non_observable) {
    out.reasons.insert(Reason::observability_reason());
  }
  out.cls = out.reasons.empty() ? MethodClass::Testable
                                : MethodClass::NotTestable;
  return out;
}

void fill_percentages(Segmentation& seg) {
  std::array<BucketStat*, 3> buckets = {&seg.trivial, &seg.testable,
                                        &seg.not_testable};
  if (seg.loc_total == 0) {
    for (auto* b : buckets) b->pct = 0;
    return;
  }
  // Largest-remainder rounding: floors first, then the leftover points go
  // to the largest fractional parts (ties by bucket order).
  std::array<double, 3> exact{};
  int floor_sum = 0;
  for (size_t i = 0; i < buckets.size(); ++i) {
    exact[i] = 100.0 * double(buckets[i]->loc) / double(seg.loc_total);
    buckets[i]->pct = static_cast<int>(exact[i]);
    floor_sum += buckets[i]->pct;
  }
  int leftovers = 100 - floor_sum;
  std::array<size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return (exact[a] - double(buckets[a]->pct)) >
           (exact[b] - double(buckets[b]->pct));
  });
  for (int i = 0; i < leftovers && i < 3; ++i) {
    buckets[order[i]]->pct += 1;
  }
}

namespace {

void account(Segmentation& seg, const MethodRecord& r) {
  switch (r.classification.cls) {
    case MethodClass::Excluded:
      return;
    case MethodClass::Trivial:
      seg.trivial.loc += r.loc;
      break;
    case MethodClass::Testable:
      seg.testable.loc += r.loc;
      break;
    case MethodClass::NotTestable:
      seg.not_testable.loc += r.loc;
      for (const auto& reason : r.classification.reasons) {
        seg.reason_loc[reason.key()] += r.loc;
      }
      break;
  }
  seg.loc_total += r.loc;
}

}  // namespace

std::vector<Segmentation> aggregate_segmentation(
    const std::vector<MethodRecord>& records) {
  Segmentation repo;
  repo.kind = ScopeKind::Repository;
  repo.id = "(all)";
  std::map<std::string, Segmentation> modules;
  std::map<std::string, Segmentation> packages;

  for (const auto& r : records) {
    account(repo, r);
    Segmentation& mod = modules[r.module];
    mod.kind = ScopeKind::Module;
    mod.id = r.module;
    account(mod, r);
    std::string pkg = r.package.empty() ? "(default)" : r.package;
    Segmentation& p = packages[pkg];
    p.kind = ScopeKind::Package;
    p.id = pkg;
    account(p, r);
  }

  std::vector<Segmentation> out;
  fill_percentages(repo);
  out.push_back(std::move(repo));
  for (auto& [_, seg] : modules) {
    fill_percentages(seg);
    out.push_back(std::move(seg));
  }
  for (auto& [_, seg] : packages) {
    fill_percentages(seg);
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace testmap
