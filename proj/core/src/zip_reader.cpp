// Copyright 2026 The sheetvis Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zip_reader.hpp"

#include <zlib.h>

#include <algorithm>

#include "sheetvis/errors.hpp"

namespace sheetvis::internal {
namespace {

constexpr std::uint32_t kEndOfCentralDirSig = 0x06054b50;
constexpr std::uint32_t kCentralDirSig = 0x02014b50;
constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::size_t kEndRecordSize = 22;

std::uint16_t U16(const std::vector<std::uint8_t>& b, std::size_t at) {
  if (at + 2 > b.size()) throw IngestError("zip: truncated archive");
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t U32(const std::vector<std::uint8_t>& b, std::size_t at) {
  if (at + 4 > b.size()) throw IngestError("zip: truncated archive");
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

}  // namespace

ZipArchive::ZipArchive(std::vector<std::uint8_t> bytes)
    : bytes_(std::move(bytes)) {
  if (bytes_.size() < kEndRecordSize) {
    throw IngestError("zip: file too small to be an archive");
  }
  // The end record sits in the last 22 + 65535 (max comment) bytes.
  std::size_t lowest =
      bytes_.size() > kEndRecordSize + 0xFFFF
          ? bytes_.size() - kEndRecordSize - 0xFFFF
          : 0;
  std::size_t eocd = std::string::npos;
  for (std::size_t at = bytes_.size() - kEndRecordSize + 1; at-- > lowest;) {
    if (U32(bytes_, at) == kEndOfCentralDirSig) {
      eocd = at;
      break;
    }
  }
  if (eocd == std::string::npos) {
    throw IngestError("zip: end of central directory not found");
  }
  std::uint16_t count = U16(bytes_, eocd + 10);
  std::uint32_t dir_offset = U32(bytes_, eocd + 16);
  if (dir_offset == 0xFFFFFFFF || count == 0xFFFF) {
    throw IngestError("zip: ZIP64 archives are not supported");
  }
  std::size_t at = dir_offset;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (U32(bytes_, at) != kCentralDirSig) {
      throw IngestError("zip: corrupt central directory");
    }
    std::uint16_t flags = U16(bytes_, at + 8);
    Entry e{};
    e.method = U16(bytes_, at + 10);
    e.crc32 = U32(bytes_, at + 16);
    e.compressed_size = U32(bytes_, at + 20);
    e.uncompressed_size = U32(bytes_, at + 24);
    std::uint16_t name_len = U16(bytes_, at + 28);
    std::uint16_t extra_len = U16(bytes_, at + 30);
    std::uint16_t comment_len = U16(bytes_, at + 32);
    e.local_header_offset = U32(bytes_, at + 42);
    if (at + 46 + name_len > bytes_.size()) {
      throw IngestError("zip: truncated central directory");
    }
    std::string name(bytes_.begin() + static_cast<std::ptrdiff_t>(at + 46),
                     bytes_.begin() +
                         static_cast<std::ptrdiff_t>(at + 46 + name_len));
    if (flags & 0x1) throw IngestError("zip: encrypted member " + name);
    entries_[name] = e;
    at += 46 + name_len + extra_len + comment_len;
  }
}

bool ZipArchive::Has(const std::string& name) const {
  return entries_.count(name) > 0;
}

std::vector<std::string> ZipArchive::Names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

std::optional<std::string> ZipArchive::Read(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  const Entry& e = it->second;
  std::size_t at = e.local_header_offset;
  if (U32(bytes_, at) != kLocalHeaderSig) {
    throw IngestError("zip: bad local header for " + name);
  }
  std::size_t data = at + 30 + U16(bytes_, at + 26) + U16(bytes_, at + 28);
  if (data + e.compressed_size > bytes_.size()) {
    throw IngestError("zip: truncated member " + name);
  }
  const std::uint8_t* src = bytes_.data() + data;
  std::string out;
  if (e.method == 0) {
    out.assign(reinterpret_cast<const char*>(src), e.compressed_size);
  } else if (e.method == 8) {
    out.resize(e.uncompressed_size);
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
      throw IngestError("zip: inflate init failed");
    }
    zs.next_in = const_cast<Bytef*>(src);
    zs.avail_in = e.compressed_size;
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != e.uncompressed_size) {
      throw IngestError("zip: corrupt deflate stream in " + name);
    }
  } else {
    throw IngestError("zip: unsupported compression method " +
                      std::to_string(e.method) + " for " + name);
  }
  auto crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data()),
                   static_cast<uInt>(out.size()));
  if (crc != e.crc32) throw IngestError("zip: CRC mismatch in " + name);
  return out;
}

}  // namespace sheetvis::internal
