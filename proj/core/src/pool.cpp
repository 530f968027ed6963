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

#include "testmap/pool.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "testmap/errors.hpp"
#include "zip.hpp"

namespace fs = std::filesystem;

namespace testmap {

void ClassPool::add(ClassModel model, std::vector<Diagnostic>* diags) {
  auto [it, inserted] = index_.try_emplace(model.internal_name, classes_.size());
  if (!inserted) {
    if (diags) {
      const ClassModel& kept = classes_[it->second];
      diags->push_back(Diagnostic{
          model.origin.input_path, model.origin.archive_entry,
          "duplicate class " + model.internal_name + ", keeping the one from " +
              kept.origin.input_path});
    }
    return;
  }
  classes_.push_back(std::move(model));
}

const ClassModel* ClassPool::find(const std::string& internal_name) const {
  auto it = index_.find(internal_name);
  return it == index_.end() ? nullptr : &classes_[it->second];
}

bool ClassPool::contains(const std::string& internal_name) const {
  return index_.count(internal_name) > 0;
}

std::string module_of(const ClassModel& cls) {
  return cls.origin.input_path;
}

namespace {

struct RawEntry {
  std::string input_path;
  std::string entry;  // relative file path or archive entry
  InputRole role = InputRole::Application;
  std::vector<uint8_t> bytes;
  std::string read_error;  // set when the entry could not be extracted
};

std::vector<uint8_t> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Expands one input path into class-file byte blobs, in a deterministic
// order (directory walks sorted by relative path, archives in directory
// order of the archive itself).
void expand_input(const InputSpec& input, std::vector<RawEntry>& out) {
  fs::path p(input.path);
  std::error_code ec;
  if (!fs::exists(p, ec) || ec) {
    throw IoError("input path does not exist: " + input.path);
  }
  if (fs::is_directory(p, ec)) {
    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(p, ec);
         it != fs::recursive_directory_iterator(); ++it) {
      if (it->is_regular_file() && it->path().extension() == ".class") {
        files.push_back(it->path());
      }
    }
    if (ec) throw IoError("cannot read directory " + input.path);
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      RawEntry e;
      e.input_path = input.path;
      e.entry = fs::relative(f, p).generic_string();
      e.role = input.role;
      e.bytes = read_file(f);
      out.push_back(std::move(e));
    }
  } else if (has_suffix(input.path, ".jar") || has_suffix(input.path, ".zip")) {
    for (auto& zentry : read_zip(input.path)) {
      if (!has_suffix(zentry.name, ".class")) continue;
      RawEntry e;
      e.input_path = input.path;
      e.entry = zentry.name;
      e.role = input.role;
      if (zentry.ok()) {
        e.bytes = std::move(zentry.data);
      } else {
        e.read_error = zentry.error;
      }
      out.push_back(std::move(e));
    }
  } else {
    RawEntry e;
    e.input_path = input.path;
    e.entry = "";
    e.role = input.role;
    e.bytes = read_file(p);
    out.push_back(std::move(e));
  }
}

struct ParsedSlot {
  ClassModel model;
  bool ok = false;
  std::string error;
};

}  // namespace

LoadResult load_inputs(const std::vector<InputSpec>& inputs,
                       const LoadOptions& options) {
  std::vector<RawEntry> entries;
  for (const auto& input : inputs) expand_input(input, entries);

  // Parse entries in parallel into positional slots; pool assembly below is
  // strictly sequential in path order, so the result does not depend on the
  // thread count.
  std::vector<ParsedSlot> slots(entries.size());
  int threads = std::max(1, options.threads);
  auto worker = [&](size_t begin, size_t step) {
    for (size_t i = begin; i < entries.size(); i += step) {
      RawEntry& e = entries[i];
      if (!e.read_error.empty()) {
        slots[i].error = e.read_error;
        continue;
      }
      try {
        slots[i].model = parse_class(e.bytes, options.parse);
        slots[i].model.origin = ClassOrigin{e.input_path, e.entry};
        slots[i].model.role = e.role;
        slots[i].ok = true;
      } catch (const Error& err) {
        slots[i].error = err.what();
      }
    }
  };
  if (threads == 1 || entries.size() < 2) {
    worker(0, 1);
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back(worker, static_cast<size_t>(t),
                           static_cast<size_t>(threads));
    }
    for (auto& w : workers) w.join();
  }

  LoadResult result;
  for (size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].ok) {
      result.pool.add(std::move(slots[i].model), &result.diagnostics);
    } else {
      result.diagnostics.push_back(Diagnostic{
          entries[i].input_path, entries[i].entry, slots[i].error});
    }
  }
  return result;
}

}  // namespace testmap
