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

#ifndef TESTMAP_POOL_HPP_
#define TESTMAP_POOL_HPP_

#include <map>
#include <string>
#include <vector>

#include "testmap/classfile.hpp"

namespace testmap {

// A non-fatal problem found while loading inputs (unparseable entry,
// duplicate class name). Fatal path problems raise IoError instead.
struct Diagnostic {
  std::string input_path;
  std::string entry;    // archive entry or file path relative to the input
  std::string message;

  auto operator<=>(const Diagnostic&) const = default;
};

struct InputSpec {
  std::string path;
  InputRole role = InputRole::Application;
};

// All parsed classes of one analysis run. Duplicate internal names keep the
// first occurrence in path order; later ones only produce a diagnostic.
class ClassPool {
 public:
  void add(ClassModel model, std::vector<Diagnostic>* diags);

  const std::vector<ClassModel>& classes() const { return classes_; }
  std::vector<ClassModel>& classes() { return classes_; }

  const ClassModel* find(const std::string& internal_name) const;
  bool contains(const std::string& internal_name) const;
  size_t size() const { return classes_.size(); }

 private:
  std::vector<ClassModel> classes_;
  std::map<std::string, size_t> index_;
};

struct LoadResult {
  ClassPool pool;
  std::vector<Diagnostic> diagnostics;
};

struct LoadOptions {
  ParseOptions parse;
  int threads = 1;  // entry parsing parallelism; output independent of it
};

// Loads class files from files, directories (recursive *.class) and .jar
// archives, in the given path order. Directory walks are sorted so the pool
// does not depend on filesystem enumeration order. Throws IoError for a
// missing/unreadable input path; per-entry parse failures become diagnostics.
LoadResult load_inputs(const std::vector<InputSpec>& inputs,
                       const LoadOptions& options = {});

// Module of a class for scope aggregation: the input path that supplied it
// (directory or archive). See the report docs for the heuristic's limits.
std::string module_of(const ClassModel& cls);

}  // namespace testmap

#endif  // TESTMAP_POOL_HPP_
