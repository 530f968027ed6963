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

#ifndef TESTMAP_SRC_ZIP_HPP_
#define TESTMAP_SRC_ZIP_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace testmap {

struct ZipEntry {
  std::string name;
  std::vector<uint8_t> data;
  std::string error;  // per-entry extraction problem; data is empty then

  bool ok() const { return error.empty(); }
};

// Reads all entries of a ZIP archive (stored and deflate methods) in central
// directory order. Throws IoError when the file is unreadable or not a ZIP
// archive; individual corrupt entries are reported via ZipEntry::error.
std::vector<ZipEntry> read_zip(const std::string& path);

}  // namespace testmap

#endif  // TESTMAP_SRC_ZIP_HPP_
