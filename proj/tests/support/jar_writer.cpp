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

#include "support/jar_writer.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace testmap::fixtures {

namespace {

void le16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void le32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

std::vector<uint8_t> deflate_raw(const std::vector<uint8_t>& data) {
  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("deflateInit2 failed");
  }
  std::vector<uint8_t> out(deflateBound(&zs, data.size()));
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw std::runtime_error("deflate failed");
  out.resize(zs.total_out);
  return out;
}

}  // namespace

void write_jar(const std::string& path, const std::vector<JarEntry>& entries) {
  std::vector<uint8_t> file;
  struct Central {
    std::string name;
    uint32_t crc, comp_size, uncomp_size, offset;
    uint16_t method;
  };
  std::vector<Central> centrals;

  for (const auto& e : entries) {
    uint32_t crc = static_cast<uint32_t>(
        crc32(0, e.data.data(), static_cast<uInt>(e.data.size())));
    if (e.corrupt_crc) crc ^= 0xDEADBEEF;
    std::vector<uint8_t> payload =
        e.deflate ? deflate_raw(e.data) : e.data;
    uint16_t method = e.deflate ? 8 : 0;
    uint32_t offset = static_cast<uint32_t>(file.size());

    le32(file, 0x04034b50);
    le16(file, 20);      // version needed
    le16(file, 0);       // flags
    le16(file, method);
    le16(file, 0);       // time
    le16(file, 0);       // date
    le32(file, crc);
    le32(file, static_cast<uint32_t>(payload.size()));
    le32(file, static_cast<uint32_t>(e.data.size()));
    le16(file, static_cast<uint16_t>(e.name.size()));
    le16(file, 0);       // extra
    file.insert(file.end(), e.name.begin(), e.name.end());
    file.insert(file.end(), payload.begin(), payload.end());

    centrals.push_back(Central{e.name, crc,
                               static_cast<uint32_t>(payload.size()),
                               static_cast<uint32_t>(e.data.size()), offset,
                               method});
  }

  uint32_t cd_offset = static_cast<uint32_t>(file.size());
  for (const auto& c : centrals) {
    le32(file, 0x02014b50);
    le16(file, 20);  // version made by
    le16(file, 20);  // version needed
    le16(file, 0);   // flags
    le16(file, c.method);
    le16(file, 0);   // time
    le16(file, 0);   // date
    le32(file, c.crc);
    le32(file, c.comp_size);
    le32(file, c.uncomp_size);
    le16(file, static_cast<uint16_t>(c.name.size()));
    le16(file, 0);   // extra
    le16(file, 0);   // comment
    le16(file, 0);   // disk
    le16(file, 0);   // internal attrs
    le32(file, 0);   // external attrs
    le32(file, c.offset);
    file.insert(file.end(), c.name.begin(), c.name.end());
  }
  uint32_t cd_size = static_cast<uint32_t>(file.size()) - cd_offset;

  le32(file, 0x06054b50);
  le16(file, 0);  // disk
  le16(file, 0);  // cd disk
  le16(file, static_cast<uint16_t>(centrals.size()));
  le16(file, static_cast<uint16_t>(centrals.size()));
  le32(file, cd_size);
  le32(file, cd_offset);
  le16(file, 0);  // comment length

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(file.data()),
            static_cast<std::streamsize>(file.size()));
}

}  // namespace testmap::fixtures
