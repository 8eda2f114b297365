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

// Self-supervised ground truth for the four probing tasks, read straight off
// a (possibly transformed) sheet. All texts are in DisplayText form.

#ifndef SHEETVIS_TRUTH_HPP_
#define SHEETVIS_TRUTH_HPP_

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sheetvis/sheet.hpp"

namespace sheetvis {

enum class AddressForm { kRc, kA1 };

std::string_view AddressFormName(AddressForm f);  // "rc" / "a1"
AddressForm AddressFormFromName(std::string_view name);
std::string FormatAddress(CellAddress a, AddressForm form);
// Throws ParseError.
CellAddress ParseAddress(std::string_view s, AddressForm form);

struct OcrCell {
  CellAddress addr;
  std::string text;
  friend bool operator==(const OcrCell&, const OcrCell&) = default;
};

// Non-null cells top to bottom, left to right.
struct OcrTruth {
  std::vector<OcrCell> sequence;

  std::vector<std::string> Texts() const;
  friend bool operator==(const OcrTruth&, const OcrTruth&) = default;
};

struct SpatialQuery {
  std::string value;
  CellAddress answer;
  friend bool operator==(const SpatialQuery&, const SpatialQuery&) = default;
};

// Shuffled queries; each value occurs in exactly one cell of the sheet.
struct SpatialTruth {
  std::vector<SpatialQuery> queries;
  AddressForm form = AddressForm::kRc;
  friend bool operator==(const SpatialTruth&, const SpatialTruth&) = default;
};

enum class VisualFormat {
  kTopBorder,
  kBottomBorder,
  kLeftBorder,
  kRightBorder,
  kBold,
  kFill
};

inline constexpr std::array<VisualFormat, 6> kAllFormats = {
    VisualFormat::kTopBorder,  VisualFormat::kBottomBorder,
    VisualFormat::kLeftBorder, VisualFormat::kRightBorder,
    VisualFormat::kBold,       VisualFormat::kFill};

// "top_border", "bottom_border", "left_border", "right_border", "bold",
// "fill_color".
std::string_view FormatName(VisualFormat f);
VisualFormat FormatFromName(std::string_view name);
// Human wording used in prompts ("top border").
std::string_view FormatDescription(VisualFormat f);

using AddressSet = std::set<CellAddress>;

struct FormatTruth {
  std::array<AddressSet, 6> cells;

  const AddressSet& of(VisualFormat f) const {
    return cells[static_cast<std::size_t>(f)];
  }
  AddressSet& of(VisualFormat f) { return cells[static_cast<std::size_t>(f)]; }
  friend bool operator==(const FormatTruth&, const FormatTruth&) = default;
};

// Non-empty cell texts along the four edges of a table, in reading order.
struct BorderContents {
  std::vector<std::string> top;
  std::vector<std::string> bottom;
  std::vector<std::string> left;
  std::vector<std::string> right;
  friend bool operator==(const BorderContents&, const BorderContents&) = default;
};

struct TableTruth {
  std::vector<TableRange> ranges;
  std::vector<BorderContents> boundaries;
  friend bool operator==(const TableTruth&, const TableTruth&) = default;
};

OcrTruth ExtractOcr(const Sheet& s);

// Default number of spatial queries when the caller does not choose.
inline constexpr std::size_t kDefaultSpatialQueries = 20;

// Cells whose display text is non-empty and unique sheet-wide, row-major.
std::vector<SpatialQuery> UniqueValueCells(const Sheet& s);

// Samples k unique-valued cells and shuffles them with a generator seeded by
// `seed`. Throws InsufficientUniquenessError when fewer than k exist.
SpatialTruth ExtractSpatial(const Sheet& s, std::size_t k, std::uint64_t seed,
                            AddressForm form);

FormatTruth ExtractFormats(const Sheet& s);

// Throws BoundsError for ranges outside the sheet.
BorderContents ExtractBorders(const Sheet& s, const TableRange& range);
TableTruth ExtractTableBoundaries(const Sheet& s,
                                  const std::vector<TableRange>& ranges);

}  // namespace sheetvis

#endif  // SHEETVIS_TRUTH_HPP_
