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
// Minimal ZIP reader for .jar archives: central-directory driven, stored and
// deflate entries, zlib for decompression. No ZIP64.

#include "zip.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "testmap/errors.hpp"

namespace testmap {

namespace {

constexpr uint32_t kEocdSignature = 0x06054b50;
constexpr uint32_t kCentralSignature = 0x02014b50;
constexpr uint32_t kLocalSignature = 0x04034b50;

uint16_t le16(const uint8_t* p) { return uint16_t(p[0]) | (uint16_t(p[1]) << 8); }
uint32_t le32(const uint8_t* p) {
  return uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) |
         (uint32_t(p[3]) << 24);
}

std::vector<uint8_t> inflate_raw(const uint8_t* data, size_t compressed_size,
                                 size_t uncompressed_size) {
  std::vector<uint8_t> out(uncompressed_size);
  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
    throw Error("zlib init failed");
  }
  zs.next_in = const_cast<Bytef*>(data);
  zs.avail_in = static_cast<uInt>(compressed_size);
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != uncompressed_size) {
    throw Error("deflate stream corrupt");
  }
  return out;
}

}  // namespace

std::vector<ZipEntry> read_zip(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open archive: " + path);
  std::vector<uint8_t> file((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  if (file.size() < 22) throw IoError("not a ZIP archive: " + path);

  // EOCD: scan back over a possible trailing comment.
  size_t eocd = std::string::npos;
  size_t scan_limit = file.size() >= 22 + 65535 ? file.size() - 22 - 65535 : 0;
  for (size_t i = file.size() - 22; ; --i) {
    if (le32(&file[i]) == kEocdSignature) {
      eocd = i;
      break;
    }
    if (i == scan_limit) break;
  }
  if (eocd == std::string::npos) {
    throw IoError("not a ZIP archive (no end-of-central-directory): " + path);
  }

  uint16_t entry_count = le16(&file[eocd + 10]);
  uint32_t cd_size = le32(&file[eocd + 12]);
  uint32_t cd_offset = le32(&file[eocd + 16]);
  if (entry_count == 0xFFFF || cd_offset == 0xFFFFFFFFu) {
    throw IoError("ZIP64 archives are not supported: " + path);
  }
  if (size_t(cd_offset) + cd_size > file.size()) {
    throw IoError("corrupt central directory: " + path);
  }

  std::vector<ZipEntry> entries;
  size_t pos = cd_offset;
  for (uint16_t i = 0; i < entry_count; ++i) {
    if (pos + 46 > file.size() || le32(&file[pos]) != kCentralSignature) {
      throw IoError("corrupt central directory entry in " + path);
    }
    uint16_t method = le16(&file[pos + 10]);
    uint32_t crc = le32(&file[pos + 16]);
    uint32_t comp_size = le32(&file[pos + 20]);
    uint32_t uncomp_size = le32(&file[pos + 24]);
    uint16_t name_len = le16(&file[pos + 28]);
    uint16_t extra_len = le16(&file[pos + 30]);
    uint16_t comment_len = le16(&file[pos + 32]);
    uint32_t local_offset = le32(&file[pos + 42]);
    if (pos + 46 + name_len > file.size()) {
      throw IoError("corrupt central directory entry in " + path);
    }
    ZipEntry entry;
    entry.name.assign(reinterpret_cast<const char*>(&file[pos + 46]), name_len);
    pos += 46 + name_len + extra_len + comment_len;

    try {
      if (size_t(local_offset) + 30 > file.size() ||
          le32(&file[local_offset]) != kLocalSignature) {
        throw Error("bad local header");
      }
      uint16_t local_name_len = le16(&file[local_offset + 26]);
      uint16_t local_extra_len = le16(&file[local_offset + 28]);
      size_t data_start = size_t(local_offset) + 30 + local_name_len + local_extra_len;
      if (data_start + comp_size > file.size()) {
        throw Error("entry data truncated");
      }
      const uint8_t* data = file.data() + data_start;
      if (method == 0) {
        if (comp_size != uncomp_size) throw Error("stored size mismatch");
        entry.data.assign(data, data + comp_size);
      } else if (method == 8) {
        entry.data = inflate_raw(data, comp_size, uncomp_size);
      } else {
        throw Error("unsupported compression method " + std::to_string(method));
      }
      uint32_t actual_crc = static_cast<uint32_t>(
          crc32(0, entry.data.data(), static_cast<uInt>(entry.data.size())));
      if (actual_crc != crc) throw Error("CRC mismatch");
    } catch (const Error& e) {
      entry.data.clear();
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace testmap
