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

#include "sheetvis/sheet.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <utility>

#include "sheetvis/errors.hpp"

namespace sheetvis {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Largest column/row we accept; far beyond any real sheet, small enough to
// keep arithmetic in int.
constexpr int kMaxIndex = 1 << 24;

int ParsePositive(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw ParseError("missing number in \"" + std::string(whole) + "\"");
  }
  int value = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() ||
      value < 1 || value > kMaxIndex) {
    throw ParseError("invalid index in \"" + std::string(whole) + "\"");
  }
  return value;
}

int HexNibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string ToHex(Rgb color) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out = "#";
  for (std::uint8_t v : {color.r, color.g, color.b}) {
    out.push_back(kDigits[v >> 4]);
    out.push_back(kDigits[v & 0xF]);
  }
  return out;
}

Rgb RgbFromHex(std::string_view hex) {
  std::string_view body = hex;
  if (!body.empty() && body.front() == '#') body.remove_prefix(1);
  if (body.size() != 6) {
    throw ParseError("invalid color \"" + std::string(hex) + "\"");
  }
  std::uint8_t channels[3];
  for (int i = 0; i < 3; ++i) {
    int hi = HexNibble(body[2 * i]);
    int lo = HexNibble(body[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw ParseError("invalid color \"" + std::string(hex) + "\"");
    }
    channels[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return Rgb{channels[0], channels[1], channels[2]};
}

bool IsNullText(std::string_view text) {
  return std::all_of(text.begin(), text.end(), IsSpace);
}

bool CellData::IsNull() const { return IsNullText(text); }

Sheet::Sheet(int rows, int cols, double default_width)
    : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw BoundsError("sheet dimensions must be positive, got " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!(default_width > 0)) throw BoundsError("column width must be > 0");
  cells_.resize(static_cast<std::size_t>(rows) * cols);
  col_widths_.assign(cols, default_width);
}

const CellData& Sheet::at(int row, int col) const {
  if (!Contains({row, col})) {
    throw BoundsError("cell (" + std::to_string(row) + "," +
                      std::to_string(col) + ") outside " +
                      std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  return cells_[static_cast<std::size_t>(row - 1) * cols_ + (col - 1)];
}

CellData& Sheet::at(int row, int col) {
  return const_cast<CellData&>(std::as_const(*this).at(row, col));
}

double Sheet::col_width(int col) const {
  if (col < 1 || col > cols_) throw BoundsError("column out of range");
  return col_widths_[col - 1];
}

void Sheet::set_col_width(int col, double width) {
  if (col < 1 || col > cols_) throw BoundsError("column out of range");
  if (!(width > 0)) throw BoundsError("column width must be > 0");
  col_widths_[col - 1] = width;
}

void Sheet::set_row_height(double h) {
  if (!(h > 0)) throw BoundsError("row height must be > 0");
  row_height_ = h;
}

void Sheet::TrimToUsedRange() {
  int last_row = 1;
  int last_col = 1;
  for (int r = 1; r <= rows_; ++r) {
    for (int c = 1; c <= cols_; ++c) {
      const CellData& cell = at(r, c);
      if (!cell.IsNull() || !cell.format.IsDefault()) {
        last_row = std::max(last_row, r);
        last_col = std::max(last_col, c);
      }
    }
  }
  if (last_row == rows_ && last_col == cols_) return;
  std::vector<CellData> kept;
  kept.reserve(static_cast<std::size_t>(last_row) * last_col);
  for (int r = 1; r <= last_row; ++r) {
    for (int c = 1; c <= last_col; ++c) kept.push_back(std::move(at(r, c)));
  }
  cells_ = std::move(kept);
  col_widths_.resize(last_col);
  rows_ = last_row;
  cols_ = last_col;
}

std::vector<std::string> Sheet::RowContents(int row) const {
  std::vector<std::string> out;
  for (int c = 1; c <= cols_; ++c) {
    const CellData& cell = at(row, c);
    if (!cell.IsNull()) out.push_back(DisplayText(cell.text));
  }
  return out;
}

std::vector<std::string> Sheet::ColumnContents(int col) const {
  std::vector<std::string> out;
  for (int r = 1; r <= rows_; ++r) {
    const CellData& cell = at(r, col);
    if (!cell.IsNull()) out.push_back(DisplayText(cell.text));
  }
  return out;
}

TableRange TableRange::Normalized() const {
  return TableRange{
      {std::min(top_left.row, bottom_right.row),
       std::min(top_left.col, bottom_right.col)},
      {std::max(top_left.row, bottom_right.row),
       std::max(top_left.col, bottom_right.col)}};
}

std::string ColumnLetters(int col) {
  if (col < 1) throw ParseError("column index must be >= 1");
  std::string out;
  while (col > 0) {
    int rem = (col - 1) % 26;
    out.push_back(static_cast<char>('A' + rem));
    col = (col - 1) / 26;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

int ColumnFromLetters(std::string_view letters) {
  if (letters.empty()) throw ParseError("empty column letters");
  long long col = 0;
  for (char ch : letters) {
    char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (up < 'A' || up > 'Z') {
      throw ParseError("invalid column letters \"" + std::string(letters) +
                       "\"");
    }
    col = col * 26 + (up - 'A' + 1);
    if (col > kMaxIndex) {
      throw ParseError("column out of range in \"" + std::string(letters) +
                       "\"");
    }
  }
  return static_cast<int>(col);
}

std::string ToA1(CellAddress addr) {
  if (addr.row < 1 || addr.col < 1) throw ParseError("invalid cell address");
  return ColumnLetters(addr.col) + std::to_string(addr.row);
}

CellAddress FromA1(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 0 || i == s.size()) {
    throw ParseError("malformed A1 address \"" + std::string(s) + "\"");
  }
  std::string_view letters = s.substr(0, i);
  std::string_view digits = s.substr(i);
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw ParseError("malformed A1 address \"" + std::string(s) + "\"");
    }
  }
  return CellAddress{ParsePositive(digits, s), ColumnFromLetters(letters)};
}

std::string ToRc(CellAddress addr) {
  if (addr.row < 1 || addr.col < 1) throw ParseError("invalid cell address");
  return std::to_string(addr.row) + "," + std::to_string(addr.col);
}

CellAddress FromRc(std::string_view s) {
  auto comma = s.find(',');
  if (comma == std::string_view::npos) {
    throw ParseError("malformed row,col address \"" + std::string(s) + "\"");
  }
  std::string row = Trim(s.substr(0, comma));
  std::string col = Trim(s.substr(comma + 1));
  return CellAddress{ParsePositive(row, s), ParsePositive(col, s)};
}

std::string RangeToA1(const TableRange& r) {
  return ToA1(r.top_left) + ":" + ToA1(r.bottom_right);
}

TableRange RangeFromA1(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError("malformed range \"" + std::string(s) + "\"");
  }
  CellAddress a = FromA1(Trim(s.substr(0, colon)));
  CellAddress b = FromA1(Trim(s.substr(colon + 1)));
  return TableRange{a, b}.Normalized();
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && IsSpace(s[b])) ++b;
  while (e > b && IsSpace(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string DisplayText(std::string_view text) {
  std::string flat;
  flat.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\r') {
      flat.push_back(' ');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else if (c == '\n') {
      flat.push_back(' ');
    } else {
      flat.push_back(c);
    }
  }
  return Trim(flat);
}

}  // namespace sheetvis
