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

// Loading workbooks from xlsx files and from the canonical JSON grid format.
//
// Canonical JSON (UTF-8):
//
//   {"name": str,
//    "sheets": [{"name": str, "rows": int, "cols": int,
//                "col_widths": [number], "row_height": number (optional),
//                "cells": [{"r": int, "c": int, "t": str,
//                           "f": {"bt": bool, "bb": bool, "bl": bool,
//                                 "br": bool, "bold": bool,
//                                 "fill": "#RRGGBB" | null}}],
//                "tables": ["A1:D9", ...]}]}
//
// Cells are listed sparsely (only non-default cells) in row-major order.
// "t" and "f" may be omitted on input and default to "" and no format.

#ifndef SHEETVIS_INGEST_HPP_
#define SHEETVIS_INGEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sheetvis/sheet.hpp"

namespace sheetvis {

struct NamedSheet {
  std::string name;
  Sheet sheet;
  // Annotated table regions, in annotation order. Empty when unannotated.
  std::vector<TableRange> tables;

  friend bool operator==(const NamedSheet&, const NamedSheet&) = default;
};

struct Workbook {
  std::string name;
  std::vector<NamedSheet> sheets;
  // Non-fatal problems met while loading (skipped chart sheets, unresolved
  // colors). Not part of the canonical form.
  std::vector<std::string> warnings;

  const NamedSheet* FindSheet(std::string_view sheet_name) const;

  // Structural equality; warnings are ignored.
  friend bool operator==(const Workbook& a, const Workbook& b) {
    return a.name == b.name && a.sheets == b.sheets;
  }
};

// Throws ConfigError when two sheets share a name.
void CheckUniqueSheetNames(const Workbook& wb);

// Reads an OOXML workbook. Each worksheet is trimmed to its used range; cell
// text is the formatted display string; styles collapse to CellFormat.
// Table annotations come from worksheet table parts and, when present, from a
// sidecar "<path>.tables.json" mapping sheet name to a list of A1 ranges.
// Throws IngestError for unreadable archives.
Workbook LoadXlsx(const std::filesystem::path& path);

nlohmann::json WorkbookToJson(const Workbook& wb);
// Throws SchemaError naming the JSON path of the first violation.
Workbook WorkbookFromJson(const nlohmann::json& doc);

nlohmann::json SheetToJson(const NamedSheet& sheet);
NamedSheet SheetFromJson(const nlohmann::json& doc,
                         const std::string& path = "$");

Workbook LoadJson(const std::filesystem::path& path);
void SaveJson(const Workbook& wb, const std::filesystem::path& path);

// Dispatches on extension: ".xlsx" or ".json".
Workbook LoadWorkbook(const std::filesystem::path& path);

}  // namespace sheetvis

#endif  // SHEETVIS_INGEST_HPP_
