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

#include <algorithm>

#include "testmap/classfile.hpp"

namespace testmap {

namespace {

// Consumes one field type at `pos`; returns false on malformed input.
bool scan_field_type(const std::string& d, size_t& pos) {
  size_t depth = 0;
  while (pos < d.size() && d[pos] == '[') {
    ++pos;
    if (++depth > 255) return false;
  }
  if (pos >= d.size()) return false;
  switch (d[pos]) {
    case 'B':
    case 'C':
    case 'D':
    case 'F':
    case 'I':
    case 'J':
    case 'S':
    case 'Z':
      ++pos;
      return true;
    case 'L': {
      size_t end = d.find(';', pos + 1);
      if (end == std::string::npos || end == pos + 1) return false;
      pos = end + 1;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

bool is_valid_field_descriptor(const std::string& d) {
  size_t pos = 0;
  return scan_field_type(d, pos) && pos == d.size();
}

bool is_valid_method_descriptor(const std::string& d) {
  if (d.empty() || d[0] != '(') return false;
  size_t pos = 1;
  while (pos < d.size() && d[pos] != ')') {
    if (!scan_field_type(d, pos)) return false;
  }
  if (pos >= d.size()) return false;
  ++pos;  // ')'
  if (pos >= d.size()) return false;
  if (d[pos] == 'V') return pos + 1 == d.size();
  return scan_field_type(d, pos) && pos == d.size();
}

int field_descriptor_slots(const std::string& d) {
  if (d == "J" || d == "D") return 2;
  return 1;
}

std::vector<std::string> method_arg_types(const std::string& descriptor) {
  std::vector<std::string> out;
  size_t pos = 1;  // after '('
  while (pos < descriptor.size() && descriptor[pos] != ')') {
    size_t start = pos;
    if (!scan_field_type(descriptor, pos)) break;
    out.push_back(descriptor.substr(start, pos - start));
  }
  return out;
}

int method_arg_slots(const std::string& descriptor) {
  int slots = 0;
  for (const auto& t : method_arg_types(descriptor)) {
    slots += field_descriptor_slots(t);
  }
  return slots;
}

bool method_returns_void(const std::string& descriptor) {
  return !descriptor.empty() && descriptor.back() == 'V';
}

int method_return_slots(const std::string& descriptor) {
  size_t close = descriptor.rfind(')');
  if (close == std::string::npos || close + 1 >= descriptor.size()) return 0;
  std::string ret = descriptor.substr(close + 1);
  if (ret == "V") return 0;
  return field_descriptor_slots(ret);
}

std::string dotted_name(const std::string& internal_name) {
  std::string out = internal_name;
  std::replace(out.begin(), out.end(), '/', '.');
  return out;
}

}  // namespace testmap
