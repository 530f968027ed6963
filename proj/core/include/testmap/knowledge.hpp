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
// Knowledge base: which callees must be mocked (and why), which are
// tolerated sinks, which are neutral. Built-in defaults, overridable from
// a TOML config; later entries win.

#ifndef TESTMAP_KNOWLEDGE_HPP_
#define TESTMAP_KNOWLEDGE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "testmap/classfile.hpp"

namespace testmap {

enum class Category {
  FileSystem,
  Network,
  Time,
  Random,
  Threading,
  ProcessEnv,
  Console,
  OtherNonDeterminism,
};

inline constexpr int kCategoryCount = 8;

const char* category_name(Category c);     // enumeration name, "FileSystem"
const char* category_key(Category c);      // report key, "file-system"
std::optional<Category> category_from_name(const std::string& name);

enum class CalleeKind { MustMock, Sink, Neutral };

const char* callee_kind_name(CalleeKind k);

struct CalleeClassification {
  CalleeKind kind = CalleeKind::Neutral;
  Category category = Category::OtherNonDeterminism;  // valid for MustMock

  bool is_must_mock() const { return kind == CalleeKind::MustMock; }
  bool is_sink() const { return kind == CalleeKind::Sink; }
};

// owner/name are glob patterns over dotted names ('*' and '?'); descriptor
// is either "*" (any) or an exact descriptor string.
struct MethodPattern {
  std::string owner;
  std::string name;
  std::string descriptor = "*";

  bool matches(const MethodId& id) const;
};

struct KnowledgeEntry {
  MethodPattern pattern;
  CalleeClassification classification;
  std::string provenance;  // "builtin" or "<config path>:<line>"
};

class KnowledgeBase {
 public:
  const std::vector<KnowledgeEntry>& entries() const { return entries_; }

  // Appends an entry; later entries override earlier ones.
  void append(KnowledgeEntry entry);

  bool mock_final_classes() const { return mock_final_classes_; }
  bool mock_static_methods() const { return mock_static_methods_; }
  void set_mock_final_classes(bool v) { mock_final_classes_ = v; }
  void set_mock_static_methods(bool v) { mock_static_methods_ = v; }

  // Stable hash over entries and switches, recorded in reports.
  std::string fingerprint() const;

 private:
  std::vector<KnowledgeEntry> entries_;
  bool mock_final_classes_ = true;
  bool mock_static_methods_ = false;
};

// Built-in defaults only.
KnowledgeBase builtin_knowledge_base();

// Built-in defaults plus, when given, entries from a TOML config appended
// after them. Throws IoError / ConfigSyntax / ConfigSemantic.
KnowledgeBase load_knowledge_base(const std::optional<std::string>& config_path);

// Classification of the last matching entry; Neutral when nothing matches.
// Pure and total.
CalleeClassification classify_callee(const MethodId& callee,
                                     const KnowledgeBase& kb);

}  // namespace testmap

#endif  // TESTMAP_KNOWLEDGE_HPP_
