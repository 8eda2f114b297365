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

// Spreadsheet data model shared by every stage of the pipeline, plus the two
// address notations used in prompts and answers:
//
//   A1 form   "B26"   bijective base-26 column letters, then the row number.
//   rc form   "26,2"  row first, comma separated; the image-space form used
//                     when the picture carries no address cues.
//
// All coordinates are 1-based. The top-left cell is (1,1).

#ifndef SHEETVIS_SHEET_HPP_
#define SHEETVIS_SHEET_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sheetvis {

struct CellAddress {
  int row = 1;
  int col = 1;

  friend auto operator<=>(const CellAddress&, const CellAddress&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// "#RRGGBB" (upper case).
std::string ToHex(Rgb color);
// Accepts "#RRGGBB" or "RRGGBB", either case. Throws ParseError.
Rgb RgbFromHex(std::string_view hex);

// The six visual formats a cell can carry.
struct CellFormat {
  bool border_top = false;
  bool border_bottom = false;
  bool border_left = false;
  bool border_right = false;
  bool bold = false;
  std::optional<Rgb> fill;

  bool IsDefault() const {
    return !border_top && !border_bottom && !border_left && !border_right &&
           !bold && !fill.has_value();
  }
  friend bool operator==(const CellFormat&, const CellFormat&) = default;
};

struct CellData {
  std::string text;
  CellFormat format;

  bool IsNull() const;
  friend bool operator==(const CellData&, const CellData&) = default;
};

// True when `text` is empty after dropping trailing whitespace.
bool IsNullText(std::string_view text);

inline constexpr double kDefaultColumnWidth = 8.43;

// Dense rectangular grid. Widths are in character units; the row height is a
// multiplier of the renderer's row pitch (1.0 = one standard row).
class Sheet {
 public:
  Sheet() : Sheet(1, 1) {}
  Sheet(int rows, int cols, double default_width = kDefaultColumnWidth);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const CellData& at(int row, int col) const;
  CellData& at(int row, int col);
  const CellData& at(CellAddress a) const { return at(a.row, a.col); }
  CellData& at(CellAddress a) { return at(a.row, a.col); }

  bool Contains(CellAddress a) const {
    return a.row >= 1 && a.col >= 1 && a.row <= rows_ && a.col <= cols_;
  }

  double col_width(int col) const;
  void set_col_width(int col, double width);
  const std::vector<double>& col_widths() const { return col_widths_; }

  double row_height() const { return row_height_; }
  void set_row_height(double h);

  // Shrinks the grid to the smallest A1-anchored rectangle holding every
  // non-null or formatted cell. A sheet with no such cell becomes 1x1.
  void TrimToUsedRange();

  // Non-null cell texts of one row (or one column), trimmed, in reading
  // order. These are the content lines scanned by boundary mapping.
  std::vector<std::string> RowContents(int row) const;
  std::vector<std::string> ColumnContents(int col) const;

  friend bool operator==(const Sheet&, const Sheet&) = default;

 private:
  int rows_;
  int cols_;
  std::vector<CellData> cells_;
  std::vector<double> col_widths_;
  double row_height_ = 1.0;
};

struct TableRange {
  CellAddress top_left;
  CellAddress bottom_right;

  int rows() const { return bottom_right.row - top_left.row + 1; }
  int cols() const { return bottom_right.col - top_left.col + 1; }
  bool Contains(CellAddress a) const {
    return a.row >= top_left.row && a.row <= bottom_right.row &&
           a.col >= top_left.col && a.col <= bottom_right.col;
  }
  // Swaps corners so that top_left <= bottom_right component-wise.
  TableRange Normalized() const;

  friend auto operator<=>(const TableRange&, const TableRange&) = default;
};

// Column index to letters: 1 -> "A", 26 -> "Z", 27 -> "AA".
std::string ColumnLetters(int col);
// Inverse of ColumnLetters; throws ParseError.
int ColumnFromLetters(std::string_view letters);

std::string ToA1(CellAddress addr);
CellAddress FromA1(std::string_view s);
std::string ToRc(CellAddress addr);
CellAddress FromRc(std::string_view s);

std::string RangeToA1(const TableRange& r);
// Corners in either order are accepted and normalized.
TableRange RangeFromA1(std::string_view s);

// Text as shown in a single-line answer: line breaks become spaces and the
// ends are trimmed. Ground truth and boundary mapping both compare this form.
std::string DisplayText(std::string_view text);

std::string Trim(std::string_view s);

}  // namespace sheetvis

#endif  // SHEETVIS_SHEET_HPP_
