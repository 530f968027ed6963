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

#ifndef TESTMAP_SRC_BYTES_HPP_
#define TESTMAP_SRC_BYTES_HPP_

#include <cstdint>
#include <span>
#include <string>

#include "testmap/errors.hpp"

namespace testmap {

// Bounds-checked big-endian reader; overruns raise MalformedClass.
class ByteReader {
 public:
  ByteReader(std::span<const uint8_t> data, std::string context)
      : data_(data), context_(std::move(context)) {}

  size_t pos() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

  uint8_t u1() {
    need(1);
    return data_[pos_++];
  }

  uint16_t u2() {
    need(2);
    uint16_t v = (uint16_t(data_[pos_]) << 8) | data_[pos_ + 1];
    pos_ += 2;
    return v;
  }

  uint32_t u4() {
    need(4);
    uint32_t v = (uint32_t(data_[pos_]) << 24) | (uint32_t(data_[pos_ + 1]) << 16) |
                 (uint32_t(data_[pos_ + 2]) << 8) | data_[pos_ + 3];
    pos_ += 4;
    return v;
  }

  int16_t s2() { return static_cast<int16_t>(u2()); }
  int32_t s4() { return static_cast<int32_t>(u4()); }

  std::string bytes(size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  void skip(size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  void need(size_t n) {
    if (data_.size() - pos_ < n) {
      throw MalformedClass("truncated data in " + context_ + " at offset " +
                           std::to_string(pos_));
    }
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  std::string context_;
};

}  // namespace testmap

#endif  // TESTMAP_SRC_BYTES_HPP_
