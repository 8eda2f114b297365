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

#include "sheetvis/truth.hpp"

#include <map>

#include "sheetvis/errors.hpp"
#include "sheetvis/random.hpp"

namespace sheetvis {

std::string_view AddressFormName(AddressForm f) {
  return f == AddressForm::kA1 ? "a1" : "rc";
}

AddressForm AddressFormFromName(std::string_view name) {
  if (name == "rc") return AddressForm::kRc;
  if (name == "a1") return AddressForm::kA1;
  throw ConfigError("unknown address form \"" + std::string(name) + "\"");
}

std::string FormatAddress(CellAddress a, AddressForm form) {
  return form == AddressForm::kA1 ? ToA1(a) : ToRc(a);
}

CellAddress ParseAddress(std::string_view s, AddressForm form) {
  return form == AddressForm::kA1 ? FromA1(s) : FromRc(s);
}

std::vector<std::string> OcrTruth::Texts() const {
  std::vector<std::string> out;
  out.reserve(sequence.size());
  for (const OcrCell& c : sequence) out.push_back(c.text);
  return out;
}

std::string_view FormatName(VisualFormat f) {
  switch (f) {
    case VisualFormat::kTopBorder: return "top_border";
    case VisualFormat::kBottomBorder: return "bottom_border";
    case VisualFormat::kLeftBorder: return "left_border";
    case VisualFormat::kRightBorder: return "right_border";
    case VisualFormat::kBold: return "bold";
    case VisualFormat::kFill: return "fill_color";
  }
  return "bold";
}

VisualFormat FormatFromName(std::string_view name) {
  for (VisualFormat f : kAllFormats) {
    if (FormatName(f) == name) return f;
  }
  throw ConfigError("unknown visual format \"" + std::string(name) + "\"");
}

std::string_view FormatDescription(VisualFormat f) {
  switch (f) {
    case VisualFormat::kTopBorder: return "a top border";
    case VisualFormat::kBottomBorder: return "a bottom border";
    case VisualFormat::kLeftBorder: return "a left border";
    case VisualFormat::kRightBorder: return "a right border";
    case VisualFormat::kBold: return "bold font";
    case VisualFormat::kFill: return "a background fill color";
  }
  return "";
}

OcrTruth ExtractOcr(const Sheet& s) {
  OcrTruth out;
  for (int r = 1; r <= s.rows(); ++r) {
    for (int c = 1; c <= s.cols(); ++c) {
      const CellData& cell = s.at(r, c);
      if (cell.IsNull()) continue;
      out.sequence.push_back({{r, c}, DisplayText(cell.text)});
    }
  }
  return out;
}

std::vector<SpatialQuery> UniqueValueCells(const Sheet& s) {
  std::map<std::string, int> counts;
  OcrTruth all = ExtractOcr(s);
  for (const OcrCell& c : all.sequence) ++counts[c.text];
  std::vector<SpatialQuery> out;
  for (const OcrCell& c : all.sequence) {
    if (counts[c.text] == 1) out.push_back({c.text, c.addr});
  }
  return out;
}

SpatialTruth ExtractSpatial(const Sheet& s, std::size_t k, std::uint64_t seed,
                            AddressForm form) {
  std::vector<SpatialQuery> pool = UniqueValueCells(s);
  if (pool.size() < k) throw InsufficientUniquenessError(k, pool.size());
  Rng rng(seed);
  // Partial Fisher-Yates: the first k slots become a uniform random sample
  // in random order.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.Below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return SpatialTruth{std::move(pool), form};
}

FormatTruth ExtractFormats(const Sheet& s) {
  FormatTruth out;
  for (int r = 1; r <= s.rows(); ++r) {
    for (int c = 1; c <= s.cols(); ++c) {
      const CellFormat& f = s.at(r, c).format;
      CellAddress a{r, c};
      if (f.border_top) out.of(VisualFormat::kTopBorder).insert(a);
      if (f.border_bottom) out.of(VisualFormat::kBottomBorder).insert(a);
      if (f.border_left) out.of(VisualFormat::kLeftBorder).insert(a);
      if (f.border_right) out.of(VisualFormat::kRightBorder).insert(a);
      if (f.bold) out.of(VisualFormat::kBold).insert(a);
      if (f.fill) out.of(VisualFormat::kFill).insert(a);
    }
  }
  return out;
}

BorderContents ExtractBorders(const Sheet& s, const TableRange& range) {
  if (!s.Contains(range.top_left) || !s.Contains(range.bottom_right) ||
      range.top_left.row > range.bottom_right.row ||
      range.top_left.col > range.bottom_right.col) {
    throw BoundsError("table " + RangeToA1(range) + " outside " +
                      std::to_string(s.rows()) + "x" +
                      std::to_string(s.cols()) + " sheet");
  }
  auto push = [&s](std::vector<std::string>& out, int r, int c) {
    const CellData& cell = s.at(r, c);
    if (!cell.IsNull()) out.push_back(DisplayText(cell.text));
  };
  BorderContents b;
  const auto [r0, c0] = range.top_left;
  const auto [r1, c1] = range.bottom_right;
  for (int c = c0; c <= c1; ++c) {
    push(b.top, r0, c);
    push(b.bottom, r1, c);
  }
  for (int r = r0; r <= r1; ++r) {
    push(b.left, r, c0);
    push(b.right, r, c1);
  }
  return b;
}

TableTruth ExtractTableBoundaries(const Sheet& s,
                                  const std::vector<TableRange>& ranges) {
  TableTruth out;
  for (const TableRange& r : ranges) {
    out.ranges.push_back(r);
    out.boundaries.push_back(ExtractBorders(s, r));
  }
  return out;
}

}  // namespace sheetvis
