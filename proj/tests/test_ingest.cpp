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

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "sheetvis/errors.hpp"
#include "sheetvis/ingest.hpp"
#include "test_util.hpp"

namespace sheetvis {
namespace {

using nlohmann::json;
using testing::BasicStyles;
using testing::BuildXlsx;
using testing::TempDir;
using testing::WriteAll;
using testing::XlsxSheet;

std::filesystem::path WriteXlsx(const TempDir& dir, const std::string& name,
                                const std::string& bytes) {
  std::filesystem::path p = dir / name;
  WriteAll(p, bytes);
  return p;
}

TEST(LoadXlsxTest, OneCellWorkbook) {
  TempDir dir;
  auto p = WriteXlsx(dir, "one.xlsx",
                     BuildXlsx({{"Sheet1", R"(<row r="1"><c r="A1" t="s"><v>0</v></c></row>)"}},
                               {"day"}, BasicStyles()));
  Workbook wb = LoadXlsx(p);
  EXPECT_EQ(wb.name, "one");
  ASSERT_EQ(wb.sheets.size(), 1u);
  const Sheet& s = wb.sheets[0].sheet;
  EXPECT_EQ(s.rows(), 1);
  EXPECT_EQ(s.cols(), 1);
  EXPECT_EQ(s.at(1, 1).text, "day");
  EXPECT_DOUBLE_EQ(s.col_width(1), kDefaultColumnWidth);
}

TEST(LoadXlsxTest, BoldWithBottomBorder) {
  TempDir dir;
  auto p = WriteXlsx(
      dir, "fmt.xlsx",
      BuildXlsx({{"S", R"(<row r="1"><c r="A1" s="1" t="s"><v>0</v></c>)"
                       R"(<c r="B1" s="2" t="inlineStr"><is><t>y</t></is></c></row>)"
                       R"(<row r="2"><c r="A2" s="4"/></row>)"}},
                {"head"}, BasicStyles()));
  Workbook wb = LoadXlsx(p);
  const Sheet& s = wb.sheets[0].sheet;
  CellFormat want;
  want.bold = true;
  want.border_bottom = true;
  EXPECT_EQ(s.at(1, 1).format, want);
  ASSERT_TRUE(s.at(1, 2).format.fill.has_value());
  EXPECT_EQ(*s.at(1, 2).format.fill, (Rgb{0xFF, 0xFF, 0x00}));
  EXPECT_EQ(s.at(1, 2).text, "y");
  // Any border weight counts as present; the empty formatted cell survives
  // trimming.
  const CellFormat& all = s.at(2, 1).format;
  EXPECT_TRUE(all.border_top && all.border_bottom && all.border_left &&
              all.border_right);
  EXPECT_EQ(s.rows(), 2);
}

TEST(LoadXlsxTest, NumberFormatsAndWidths) {
  TempDir dir;
  auto p = WriteXlsx(
      dir, "num.xlsx",
      BuildXlsx({{"S",
                  R"(<row r="1"><c r="A1" s="3"><v>3.14159</v></c>)"
                  R"(<c r="B1"><v>42</v></c><c r="C1" t="b"><v>1</v></c></row>)",
                  R"(<cols><col min="1" max="1" width="20" customWidth="1"/></cols>)"}},
                {}, BasicStyles()));
  Workbook wb = LoadXlsx(p);
  const Sheet& s = wb.sheets[0].sheet;
  EXPECT_EQ(s.at(1, 1).text, "3.14");
  EXPECT_EQ(s.at(1, 2).text, "42");
  EXPECT_EQ(s.at(1, 3).text, "TRUE");
  EXPECT_DOUBLE_EQ(s.col_width(1), 20.0);
  EXPECT_DOUBLE_EQ(s.col_width(2), kDefaultColumnWidth);
}

TEST(LoadXlsxTest, TablePartBecomesAnnotation) {
  TempDir dir;
  auto p = WriteXlsx(
      dir, "ts.xlsx",
      BuildXlsx({{"S",
                  R"(<row r="2"><c r="A2" t="s"><v>0</v></c></row>)"
                  R"(<row r="32"><c r="N32" t="s"><v>1</v></c></row>)",
                  "", "A2:N32"}},
                {"h", "t"}, BasicStyles()));
  Workbook wb = LoadXlsx(p);
  ASSERT_EQ(wb.sheets[0].tables.size(), 1u);
  EXPECT_EQ(wb.sheets[0].tables[0], (TableRange{{2, 1}, {32, 14}}));
}

TEST(LoadXlsxTest, SidecarOverridesAnnotations) {
  TempDir dir;
  auto p = WriteXlsx(
      dir, "side.xlsx",
      BuildXlsx({{"S", R"(<row r="3"><c r="C3" t="s"><v>0</v></c></row>)"}},
                {"v"}, BasicStyles()));
  WriteAll(dir / "side.xlsx.tables.json", R"({"S": ["A1:C3"], "Nope": ["A1:A1"]})");
  Workbook wb = LoadXlsx(p);
  ASSERT_EQ(wb.sheets[0].tables.size(), 1u);
  EXPECT_EQ(RangeToA1(wb.sheets[0].tables[0]), "A1:C3");
  EXPECT_FALSE(wb.warnings.empty());
}

TEST(LoadXlsxTest, ChartSheetIsSkippedWithWarning) {
  TempDir dir;
  auto p = WriteXlsx(
      dir, "chart.xlsx",
      BuildXlsx({{"Data", R"(<row r="1"><c r="A1"><v>1</v></c></row>)"}}, {},
                BasicStyles(), /*with_chart_sheet=*/true));
  Workbook wb = LoadXlsx(p);
  ASSERT_EQ(wb.sheets.size(), 1u);
  EXPECT_EQ(wb.sheets[0].name, "Data");
  ASSERT_EQ(wb.warnings.size(), 1u);
  EXPECT_NE(wb.warnings[0].find("Chart1"), std::string::npos);
}

TEST(LoadXlsxTest, UnreadableArchive) {
  TempDir dir;
  auto p = WriteXlsx(dir, "bad.xlsx", "this is not a zip file");
  EXPECT_THROW(LoadXlsx(p), IngestError);
  EXPECT_THROW(LoadXlsx(dir / "missing.xlsx"), IngestError);
}

NamedSheet SampleSheet(const std::string& name) {
  NamedSheet ns{name, Sheet(12, 6), {}};
  ns.sheet.at(1, 1).text = "day";
  ns.sheet.at(1, 2).text = "cost";
  ns.sheet.at(1, 1).format.bold = true;
  ns.sheet.at(2, 2).format.fill = Rgb{0x12, 0xAB, 0xEF};
  ns.sheet.at(3, 3).format.border_left = true;
  ns.sheet.at(3, 3).format.border_right = true;
  ns.sheet.at(4, 4).text = "multi\nline";
  ns.sheet.set_col_width(2, 17.5);
  ns.tables = {{{1, 1}, {3, 2}}, {{5, 1}, {9, 3}}, {{11, 5}, {12, 6}}};
  return ns;
}

TEST(JsonTest, RoundTripIsLossless) {
  TempDir dir;
  Workbook wb;
  wb.name = "book";
  wb.sheets = {SampleSheet("One"), SampleSheet("Two")};
  wb.sheets[1].sheet.set_row_height(1.5);
  SaveJson(wb, dir / "book.json");
  Workbook back = LoadJson(dir / "book.json");
  EXPECT_EQ(back, wb);
  EXPECT_EQ(back.sheets[0].tables.size(), 3u);
  EXPECT_EQ(*back.sheets[0].sheet.at(2, 2).format.fill, (Rgb{0x12, 0xAB, 0xEF}));
}

TEST(JsonTest, MinimalDocument) {
  json doc = json::parse(R"({"name":"m","sheets":[{"name":"S","rows":1,"cols":1,
      "col_widths":[8.43],"cells":[{"r":1,"c":1,"t":"x"}]}]})");
  Workbook wb = WorkbookFromJson(doc);
  EXPECT_EQ(wb.sheets[0].sheet.at(1, 1).text, "x");
  EXPECT_EQ(WorkbookFromJson(WorkbookToJson(wb)), wb);
}

TEST(JsonTest, CellsAreSparseAndRowMajor) {
  json j = SheetToJson(SampleSheet("S"));
  std::vector<std::pair<int, int>> order;
  for (const json& c : j["cells"]) order.push_back({c["r"], c["c"]});
  EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
  EXPECT_EQ(order.size(), 5u);
}

TEST(JsonTest, SchemaErrorsNameThePath) {
  auto path_of = [](const std::string& text) -> std::string {
    try {
      WorkbookFromJson(json::parse(text));
    } catch (const SchemaError& e) {
      return e.path();
    }
    return "<accepted>";
  };
  EXPECT_EQ(path_of(R"({"sheets":[]})"), "$.name");
  EXPECT_EQ(path_of(R"({"name":"x","sheets":[{"name":"S","rows":0,"cols":1,
      "col_widths":[1],"cells":[]}]})"), "$.sheets[0].rows");
  EXPECT_EQ(path_of(R"({"name":"x","sheets":[{"name":"S","rows":1,"cols":1,
      "col_widths":[1],"cells":[{"r":1,"c":1,"f":{"fill":"#ZZZZZZ"}}]}]})"),
            "$.sheets[0].cells[0].f.fill");
  EXPECT_EQ(path_of(R"({"name":"x","sheets":[{"name":"S","rows":1,"cols":1,
      "col_widths":[1],"cells":[{"r":2,"c":1}]}]})"), "$.sheets[0].cells[0]");
  EXPECT_EQ(path_of(R"({"name":"x","sheets":[{"name":"S","rows":1,"cols":1,
      "col_widths":[1],"cells":[],"tables":["A1:B2"]}]})"),
            "$.sheets[0].tables[0]");
}

TEST(JsonTest, DuplicateSheetNames) {
  Workbook wb;
  wb.name = "dup";
  wb.sheets = {SampleSheet("S"), SampleSheet("S")};
  EXPECT_THROW(CheckUniqueSheetNames(wb), ConfigError);
}

TEST(LoadWorkbookTest, DispatchesOnExtension) {
  TempDir dir;
  Workbook wb;
  wb.name = "d";
  wb.sheets = {SampleSheet("S")};
  SaveJson(wb, dir / "d.json");
  EXPECT_EQ(LoadWorkbook(dir / "d.json"), wb);
  WriteAll(dir / "d.csv", "a,b");
  EXPECT_THROW(LoadWorkbook(dir / "d.csv"), Error);
}

}  // namespace
}  // namespace sheetvis
