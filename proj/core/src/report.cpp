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
// Report serialization and diffing. Field order and method ordering are
// fixed so identical analyses produce identical bytes.

#include "testmap/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "testmap/errors.hpp"
#include "testmap/version.hpp"

#include <nlohmann/json.hpp>

namespace testmap {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json id_to_json(const MethodId& id) {
  ordered_json j;
  j["owner"] = id.owner;
  j["name"] = id.name;
  j["descriptor"] = id.descriptor;
  return j;
}

MethodId id_from_json(const ordered_json& j) {
  return MethodId{j.at("owner").get<std::string>(),
                  j.at("name").get<std::string>(),
                  j.at("descriptor").get<std::string>()};
}

ordered_json segmentation_to_json(const Segmentation& seg) {
  ordered_json j;
  j["scope"] = scope_kind_key(seg.kind);
  j["id"] = seg.id;
  j["loc_total"] = seg.loc_total;
  ordered_json buckets;
  auto bucket = [](const BucketStat& b) {
    ordered_json out;
    out["loc"] = b.loc;
    out["pct"] = b.pct;
    return out;
  };
  buckets["not_testable"] = bucket(seg.not_testable);
  buckets["trivial"] = bucket(seg.trivial);
  buckets["testable"] = bucket(seg.testable);
  j["buckets"] = buckets;
  ordered_json reasons = ordered_json::object();
  for (const auto& [key, loc] : seg.reason_loc) reasons[key] = loc;
  j["reason_loc"] = reasons;
  return j;
}

Segmentation segmentation_from_json(const ordered_json& j) {
  Segmentation seg;
  std::string scope = j.at("scope").get<std::string>();
  if (scope == "module") {
    seg.kind = ScopeKind::Module;
  } else if (scope == "package") {
    seg.kind = ScopeKind::Package;
  } else {
    seg.kind = ScopeKind::Repository;
  }
  seg.id = j.at("id").get<std::string>();
  seg.loc_total = j.at("loc_total").get<uint64_t>();
  const auto& buckets = j.at("buckets");
  auto bucket = [](const ordered_json& b) {
    BucketStat out;
    out.loc = b.at("loc").get<uint64_t>();
    out.pct = b.at("pct").get<int>();
    return out;
  };
  seg.not_testable = bucket(buckets.at("not_testable"));
  seg.trivial = bucket(buckets.at("trivial"));
  seg.testable = bucket(buckets.at("testable"));
  for (const auto& [key, loc] : j.at("reason_loc").items()) {
    seg.reason_loc[key] = loc.get<uint64_t>();
  }
  return seg;
}

}  // namespace

std::string report_to_json(const Report& report) {
  ordered_json j;
  j["schema_version"] = report.schema_version;
  ordered_json tool;
  tool["name"] = report.tool_name;
  tool["version"] = report.tool_version;
  j["tool"] = tool;
  ordered_json inputs = ordered_json::array();
  for (const auto& in : report.inputs) {
    ordered_json e;
    e["path"] = in.path;
    e["role"] = in.role;
    inputs.push_back(e);
  }
  j["inputs"] = inputs;
  j["kb_fingerprint"] = report.kb_fingerprint;

  ordered_json methods = ordered_json::array();
  for (const auto& m : report.methods) {
    ordered_json e;
    e["id"] = id_to_json(m.id);
    e["classification"] = m.classification;
    if (!m.trivial_kind.empty()) e["trivial_kind"] = m.trivial_kind;
    if (!m.excluded_reason.empty()) e["excluded_reason"] = m.excluded_reason;
    if (!m.reasons.empty()) e["reasons"] = m.reasons;
    e["loc"] = m.loc;
    if (m.complexity > 0) e["complexity"] = m.complexity;
    if (m.line > 0) e["line"] = m.line;
    e["module"] = m.module;
    e["package"] = m.package;
    if (m.trace) {
      ordered_json t;
      t["category"] = m.trace->category_key;
      if (m.trace->receiver_field) {
        t["receiver_field"] = *m.trace->receiver_field;
      }
      ordered_json chain = ordered_json::array();
      for (const auto& hop : m.trace->chain) {
        ordered_json h = id_to_json(hop.method);
        h["line"] = hop.line;
        chain.push_back(h);
      }
      t["chain"] = chain;
      e["trace"] = t;
    }
    methods.push_back(e);
  }
  j["methods"] = methods;

  ordered_json segs = ordered_json::array();
  for (const auto& seg : report.segmentations) {
    segs.push_back(segmentation_to_json(seg));
  }
  j["segmentations"] = segs;

  ordered_json diags = ordered_json::array();
  for (const auto& d : report.diagnostics) {
    ordered_json e;
    e["input"] = d.input_path;
    e["entry"] = d.entry;
    e["message"] = d.message;
    diags.push_back(e);
  }
  j["diagnostics"] = diags;

  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(std::string("not a report document: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version")) {
    throw Error("not a report document: missing schema_version");
  }
  Report report;
  report.schema_version = j.at("schema_version").get<int>();
  if (report.schema_version != kSchemaVersion) {
    throw SchemaMismatch("unsupported report schema version " +
                         std::to_string(report.schema_version) +
                         ", expected " + std::to_string(kSchemaVersion));
  }
  report.tool_name = j.at("tool").at("name").get<std::string>();
  report.tool_version = j.at("tool").at("version").get<std::string>();
  for (const auto& in : j.at("inputs")) {
    report.inputs.push_back(ReportInput{in.at("path").get<std::string>(),
                                        in.at("role").get<std::string>()});
  }
  report.kb_fingerprint = j.at("kb_fingerprint").get<std::string>();
  for (const auto& e : j.at("methods")) {
    ReportMethod m;
    m.id = id_from_json(e.at("id"));
    m.classification = e.at("classification").get<std::string>();
    if (e.contains("trivial_kind")) {
      m.trivial_kind = e.at("trivial_kind").get<std::string>();
    }
    if (e.contains("excluded_reason")) {
      m.excluded_reason = e.at("excluded_reason").get<std::string>();
    }
    if (e.contains("reasons")) {
      m.reasons = e.at("reasons").get<std::vector<std::string>>();
    }
    m.loc = e.at("loc").get<uint32_t>();
    if (e.contains("complexity")) m.complexity = e.at("complexity").get<uint32_t>();
    if (e.contains("line")) m.line = e.at("line").get<uint32_t>();
    m.module = e.at("module").get<std::string>();
    m.package = e.at("package").get<std::string>();
    if (e.contains("trace")) {
      TraceRecord t;
      const auto& tj = e.at("trace");
      t.category_key = tj.at("category").get<std::string>();
      if (tj.contains("receiver_field")) {
        t.receiver_field = tj.at("receiver_field").get<std::string>();
      }
      for (const auto& h : tj.at("chain")) {
        TraceRecord::Hop hop;
        hop.method = id_from_json(h);
        hop.line = h.at("line").get<uint32_t>();
        t.chain.push_back(hop);
      }
      m.trace = std::move(t);
    }
    report.methods.push_back(std::move(m));
  }
  for (const auto& s : j.at("segmentations")) {
    report.segmentations.push_back(segmentation_from_json(s));
  }
  for (const auto& d : j.at("diagnostics")) {
    report.diagnostics.push_back(Diagnostic{d.at("input").get<std::string>(),
                                            d.at("entry").get<std::string>(),
                                            d.at("message").get<std::string>()});
  }
  return report;
}

Report load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read report: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str());
}

void write_report(const Report& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report: " + path);
  out << report_to_json(report);
}

bool DiffReport::is_zero() const {
  if (!transitions.empty() || !added.empty() || !removed.empty()) return false;
  for (const auto& d : deltas) {
    if (d.trivial_loc || d.testable_loc || d.not_testable_loc || d.trivial_pct ||
        d.testable_pct || d.not_testable_pct) {
      return false;
    }
  }
  return true;
}

namespace {

std::string render_classification(const ReportMethod& m) {
  std::string out = m.classification;
  if (!m.reasons.empty()) {
    out += "(";
    for (size_t i = 0; i < m.reasons.size(); ++i) {
      if (i) out += ",";
      out += m.reasons[i];
    }
    out += ")";
  }
  return out;
}

}  // namespace

DiffReport diff_reports(const Report& before, const Report& after) {
  if (before.schema_version != after.schema_version) {
    throw SchemaMismatch("cannot diff reports with schema versions " +
                         std::to_string(before.schema_version) + " and " +
                         std::to_string(after.schema_version));
  }
  DiffReport diff;

  std::map<std::pair<std::string, std::string>, const Segmentation*> b_scopes;
  std::map<std::pair<std::string, std::string>, const Segmentation*> a_scopes;
  for (const auto& s : before.segmentations) {
    b_scopes[{scope_kind_key(s.kind), s.id}] = &s;
  }
  for (const auto& s : after.segmentations) {
    a_scopes[{scope_kind_key(s.kind), s.id}] = &s;
  }
  std::map<std::pair<std::string, std::string>, const Segmentation*> all;
  all.insert(b_scopes.begin(), b_scopes.end());
  all.insert(a_scopes.begin(), a_scopes.end());
  for (const auto& [key, _] : all) {
    const Segmentation* b = b_scopes.count(key) ? b_scopes[key] : nullptr;
    const Segmentation* a = a_scopes.count(key) ? a_scopes[key] : nullptr;
    BucketDelta d;
    d.kind = (b ? b : a)->kind;
    d.id = key.second;
    auto loc = [](const Segmentation* s, const BucketStat Segmentation::*b) {
      return s ? int64_t((s->*b).loc) : 0;
    };
    auto pct = [](const Segmentation* s, const BucketStat Segmentation::*b) {
      return s ? (s->*b).pct : 0;
    };
    d.trivial_loc = loc(a, &Segmentation::trivial) - loc(b, &Segmentation::trivial);
    d.testable_loc =
        loc(a, &Segmentation::testable) - loc(b, &Segmentation::testable);
    d.not_testable_loc = loc(a, &Segmentation::not_testable) -
                         loc(b, &Segmentation::not_testable);
    d.trivial_pct = pct(a, &Segmentation::trivial) - pct(b, &Segmentation::trivial);
    d.testable_pct =
        pct(a, &Segmentation::testable) - pct(b, &Segmentation::testable);
    d.not_testable_pct = pct(a, &Segmentation::not_testable) -
                         pct(b, &Segmentation::not_testable);
    diff.deltas.push_back(std::move(d));
  }

  std::map<MethodId, const ReportMethod*> b_methods;
  std::map<MethodId, const ReportMethod*> a_methods;
  for (const auto& m : before.methods) b_methods[m.id] = &m;
  for (const auto& m : after.methods) a_methods[m.id] = &m;
  for (const auto& [id, bm] : b_methods) {
    auto it = a_methods.find(id);
    if (it == a_methods.end()) {
      diff.removed.push_back(id);
      continue;
    }
    std::string b_render = render_classification(*bm);
    std::string a_render = render_classification(*it->second);
    if (b_render != a_render) {
      diff.transitions.push_back(MethodTransition{id, b_render, a_render});
    }
  }
  for (const auto& [id, _] : a_methods) {
    if (!b_methods.count(id)) diff.added.push_back(id);
  }
  return diff;
}

std::string diff_to_json(const DiffReport& diff) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  ordered_json deltas = ordered_json::array();
  for (const auto& d : diff.deltas) {
    ordered_json e;
    e["scope"] = scope_kind_key(d.kind);
    e["id"] = d.id;
    e["not_testable_loc"] = d.not_testable_loc;
    e["trivial_loc"] = d.trivial_loc;
    e["testable_loc"] = d.testable_loc;
    e["not_testable_pct"] = d.not_testable_pct;
    e["trivial_pct"] = d.trivial_pct;
    e["testable_pct"] = d.testable_pct;
    deltas.push_back(e);
  }
  j["bucket_deltas"] = deltas;
  ordered_json transitions = ordered_json::array();
  for (const auto& t : diff.transitions) {
    ordered_json e;
    e["id"] = id_to_json(t.id);
    e["before"] = t.before;
    e["after"] = t.after;
    transitions.push_back(e);
  }
  j["transitions"] = transitions;
  ordered_json added = ordered_json::array();
  for (const auto& id : diff.added) added.push_back(id_to_json(id));
  j["added"] = added;
  ordered_json removed = ordered_json::array();
  for (const auto& id : diff.removed) removed.push_back(id_to_json(id));
  j["removed"] = removed;
  return j.dump(2) + "\n";
}

}  // namespace testmap
