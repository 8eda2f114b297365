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

// Shared helpers for the unit tests: scratch directories and a tiny xlsx
// writer (stored zip entries) for building fixtures in code.

#ifndef SHEETVIS_TESTS_TEST_UTIL_HPP_
#define SHEETVIS_TESTS_TEST_UTIL_HPP_

#include <zlib.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

namespace sheetvis::testing {

class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "sheetvis_XXXXXX").string();
    path_ = mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void WriteAll(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary);
  out << data;
}

// Zip archive with every entry stored uncompressed.
inline std::string BuildZip(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  auto u16 = [](std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v & 0xFF));
    s.push_back(static_cast<char>(v >> 8));
  };
  auto u32 = [](std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  std::string body, central;
  for (const auto& [name, data] : entries) {
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(data.data()),
              static_cast<uInt>(data.size())));
    std::uint32_t offset = static_cast<std::uint32_t>(body.size());
    u32(body, 0x04034b50);
    u16(body, 20); u16(body, 0); u16(body, 0); u16(body, 0); u16(body, 0);
    u32(body, crc);
    u32(body, static_cast<std::uint32_t>(data.size()));
    u32(body, static_cast<std::uint32_t>(data.size()));
    u16(body, static_cast<std::uint16_t>(name.size()));
    u16(body, 0);
    body += name;
    body += data;

    u32(central, 0x02014b50);
    u16(central, 20); u16(central, 20); u16(central, 0); u16(central, 0);
    u16(central, 0); u16(central, 0);
    u32(central, crc);
    u32(central, static_cast<std::uint32_t>(data.size()));
    u32(central, static_cast<std::uint32_t>(data.size()));
    u16(central, static_cast<std::uint16_t>(name.size()));
    u16(central, 0); u16(central, 0); u16(central, 0); u16(central, 0);
    u32(central, 0);
    u32(central, offset);
    central += name;
  }
  std::string out = body + central;
  u32(out, 0x06054b50);
  u16(out, 0); u16(out, 0);
  u16(out, static_cast<std::uint16_t>(entries.size()));
  u16(out, static_cast<std::uint16_t>(entries.size()));
  u32(out, static_cast<std::uint32_t>(central.size()));
  u32(out, static_cast<std::uint32_t>(body.size()));
  u16(out, 0);
  return out;
}

struct XlsxSheet {
  std::string name;
  std::string sheet_data;   // contents of <sheetData>
  std::string cols;         // optional <cols> element
  std::string table_ref;    // optional table part range, e.g. "A2:N32"
};

// Builds a workbook with the given worksheets, shared strings and a styles
// part (the contents of <styleSheet>).
inline std::string BuildXlsx(const std::vector<XlsxSheet>& sheets,
                             const std::vector<std::string>& shared,
                             const std::string& styles,
                             bool with_chart_sheet = false) {
  const std::string ns =
      "http://schemas.openxmlformats.org/spreadsheetml/2006/main";
  const std::string rel_ns =
      "http://schemas.openxmlformats.org/officeDocument/2006/relationships";
  const std::string rel_pkg =
      "http://schemas.openxmlformats.org/package/2006/relationships";
  std::vector<std::pair<std::string, std::string>> e;
  e.push_back({"[Content_Types].xml",
               "<?xml version=\"1.0\"?><Types "
               "xmlns=\"http://schemas.openxmlformats.org/package/2006/"
               "content-types\"/>"});
  e.push_back({"_rels/.rels",
               "<?xml version=\"1.0\"?><Relationships xmlns=\"" + rel_pkg +
                   "\"><Relationship Id=\"rId1\" Type=\"" + rel_ns +
                   "/officeDocument\" Target=\"xl/workbook.xml\"/>"
                   "</Relationships>"});
  std::string wb = "<?xml version=\"1.0\"?><workbook xmlns=\"" + ns +
                   "\" xmlns:r=\"" + rel_ns + "\"><sheets>";
  std::string rels = "<?xml version=\"1.0\"?><Relationships xmlns=\"" +
                     rel_pkg + "\">";
  for (std::size_t i = 0; i < sheets.size(); ++i) {
    std::string id = "rId" + std::to_string(i + 1);
    std::string file = "sheet" + std::to_string(i + 1) + ".xml";
    wb += "<sheet name=\"" + sheets[i].name + "\" sheetId=\"" +
          std::to_string(i + 1) + "\" r:id=\"" + id + "\"/>";
    rels += "<Relationship Id=\"" + id + "\" Type=\"" + rel_ns +
            "/worksheet\" Target=\"worksheets/" + file + "\"/>";
    std::string ws = "<?xml version=\"1.0\"?><worksheet xmlns=\"" + ns +
                     "\" xmlns:r=\"" + rel_ns + "\">" + sheets[i].cols +
                     "<sheetData>" + sheets[i].sheet_data + "</sheetData>";
    if (!sheets[i].table_ref.empty()) {
      std::string tfile = "table" + std::to_string(i + 1) + ".xml";
      ws += "<tableParts count=\"1\"><tablePart r:id=\"rIdT\"/></tableParts>";
      e.push_back({"xl/worksheets/_rels/" + file + ".rels",
                   "<?xml version=\"1.0\"?><Relationships xmlns=\"" + rel_pkg +
                       "\"><Relationship Id=\"rIdT\" Type=\"" + rel_ns +
                       "/table\" Target=\"../tables/" + tfile +
                       "\"/></Relationships>"});
      e.push_back({"xl/tables/" + tfile,
                   "<?xml version=\"1.0\"?><table xmlns=\"" + ns +
                       "\" id=\"1\" name=\"T1\" ref=\"" + sheets[i].table_ref +
                       "\"/>"});
    }
    ws += "</worksheet>";
    e.push_back({"xl/worksheets/" + file, ws});
  }
  if (with_chart_sheet) {
    wb += "<sheet name=\"Chart1\" sheetId=\"99\" r:id=\"rIdC\"/>";
    rels += "<Relationship Id=\"rIdC\" Type=\"" + rel_ns +
            "/chartsheet\" Target=\"chartsheets/sheet1.xml\"/>";
  }
  wb += "</sheets></workbook>";
  std::string n = std::to_string(sheets.size());
  rels += "<Relationship Id=\"rIdS\" Type=\"" + rel_ns +
          "/sharedStrings\" Target=\"sharedStrings.xml\"/>";
  rels += "<Relationship Id=\"rIdY\" Type=\"" + rel_ns +
          "/styles\" Target=\"styles.xml\"/>";
  rels += "</Relationships>";
  e.push_back({"xl/workbook.xml", wb});
  e.push_back({"xl/_rels/workbook.xml.rels", rels});
  std::string sst = "<?xml version=\"1.0\"?><sst xmlns=\"" + ns + "\">";
  for (const std::string& s : shared) sst += "<si><t>" + s + "</t></si>";
  sst += "</sst>";
  e.push_back({"xl/sharedStrings.xml", sst});
  e.push_back({"xl/styles.xml", "<?xml version=\"1.0\"?><styleSheet xmlns=\"" +
                                    ns + "\">" + styles + "</styleSheet>"});
  return BuildZip(e);
}

// Styles with: xf 0 default, xf 1 bold + bottom border, xf 2 yellow fill,
// xf 3 number format "0.00", xf 4 all four borders.
inline std::string BasicStyles() {
  return "<numFmts count=\"1\"><numFmt numFmtId=\"164\" formatCode=\"0.00\"/>"
         "</numFmts>"
         "<fonts count=\"2\"><font><sz val=\"11\"/></font><font><b/>"
         "<sz val=\"11\"/></font></fonts>"
         "<fills count=\"3\"><fill><patternFill patternType=\"none\"/></fill>"
         "<fill><patternFill patternType=\"gray125\"/></fill>"
         "<fill><patternFill patternType=\"solid\"><fgColor rgb=\"FFFFFF00\"/>"
         "</patternFill></fill></fills>"
         "<borders count=\"3\"><border><left/><right/><top/><bottom/></border>"
         "<border><left/><right/><top/><bottom style=\"thin\"/></border>"
         "<border><left style=\"thin\"/><right style=\"medium\"/>"
         "<top style=\"double\"/><bottom style=\"thin\"/></border></borders>"
         "<cellXfs count=\"5\">"
         "<xf numFmtId=\"0\" fontId=\"0\" fillId=\"0\" borderId=\"0\"/>"
         "<xf numFmtId=\"0\" fontId=\"1\" fillId=\"0\" borderId=\"1\"/>"
         "<xf numFmtId=\"0\" fontId=\"0\" fillId=\"2\" borderId=\"0\"/>"
         "<xf numFmtId=\"164\" fontId=\"0\" fillId=\"0\" borderId=\"0\"/>"
         "<xf numFmtId=\"0\" fontId=\"0\" fillId=\"0\" borderId=\"2\"/>"
         "</cellXfs>";
}

}  // namespace sheetvis::testing

#endif  // SHEETVIS_TESTS_TEST_UTIL_HPP_
