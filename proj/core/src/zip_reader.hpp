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

#ifndef SHEETVIS_ZIP_READER_HPP_
#define SHEETVIS_ZIP_READER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sheetvis::internal {

// Read-only view of a ZIP archive held in memory. Supports stored and
// deflated members; ZIP64 and encryption are rejected.
class ZipArchive {
 public:
  // Throws IngestError when the central directory cannot be read.
  explicit ZipArchive(std::vector<std::uint8_t> bytes);

  bool Has(const std::string& name) const;
  // Decompressed member contents, or nullopt when absent. Throws IngestError
  // on corrupt data.
  std::optional<std::string> Read(const std::string& name) const;
  std::vector<std::string> Names() const;

 private:
  struct Entry {
    std::uint16_t method;
    std::uint32_t crc32;
    std::uint32_t compressed_size;
    std::uint32_t uncompressed_size;
    std::uint32_t local_header_offset;
  };

  std::vector<std::uint8_t> bytes_;
  std::map<std::string, Entry> entries_;
};

}  // namespace sheetvis::internal

#endif  // SHEETVIS_ZIP_READER_HPP_
