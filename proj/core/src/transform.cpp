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

#include "sheetvis/transform.hpp"

#include <algorithm>

#include "sheetvis/errors.hpp"

namespace sheetvis {
namespace {

constexpr std::string_view kTagSeparator = ", ";

int TagLength(CellAddress a) {
  return static_cast<int>(ToA1(a).size() + kTagSeparator.size());
}

template <typename CapFn>
Sheet FitWidths(const Sheet& s, CapFn cap_for) {
  Sheet out = s;
  for (int c = 1; c <= s.cols(); ++c) {
    int longest = 0;
    for (int r = 1; r <= s.rows(); ++r) {
      const CellData& cell = s.at(r, c);
      if (cell.IsNull()) continue;
      longest = std::max(longest, std::min(DisplayLength(cell.text),
                                           cap_for(CellAddress{r, c})));
    }
    out.set_col_width(c, std::max(longest + kWidthPadChars, kMinFittedWidth));
  }
  return out;
}

}  // namespace

std::string_view SettingName(Setting s) {
  switch (s) {
    case Setting::kVanilla: return "vanilla";
    case Setting::kColWidthAdjust: return "colwidth_adjust";
    case Setting::kStyleChange: return "style_change";
    case Setting::kAddressAugment: return "address_augment";
  }
  return "vanilla";
}

Setting SettingFromName(std::string_view name) {
  for (Setting s : kAllSettings) {
    if (SettingName(s) == name) return s;
  }
  throw ConfigError("unknown setting \"" + std::string(name) + "\"");
}

int DisplayLength(std::string_view text) {
  int n = 0;
  for (unsigned char ch : text) {
    if ((ch & 0xC0) != 0x80) ++n;  // count lead bytes only
  }
  return n;
}

Sheet AdjustColumnWidths(const Sheet& s) {
  return FitWidths(s, [](CellAddress) { return kWidthCapChars; });
}

Sheet AdjustColumnWidthsTagged(const Sheet& s) {
  return FitWidths(s,
                   [](CellAddress a) { return kWidthCapChars + TagLength(a); });
}

Sheet NormalizeStyle(const Sheet& s) {
  Sheet out = s;
  for (int r = 1; r <= out.rows(); ++r) {
    for (int c = 1; c <= out.cols(); ++c) {
      CellFormat& f = out.at(r, c).format;
      f.bold = false;
      f.fill.reset();
    }
  }
  return out;
}

Sheet AugmentAddresses(const Sheet& s) {
  Sheet out = s;
  for (int r = 1; r <= out.rows(); ++r) {
    for (int c = 1; c <= out.cols(); ++c) {
      CellData& cell = out.at(r, c);
      if (cell.IsNull()) continue;
      cell.text = ToA1({r, c}) + std::string(kTagSeparator) + cell.text;
    }
  }
  return out;
}

Sheet ApplySetting(const Sheet& s, Setting setting) {
  switch (setting) {
    case Setting::kVanilla:
      return s;
    case Setting::kColWidthAdjust:
      return AdjustColumnWidths(s);
    case Setting::kStyleChange:
      return NormalizeStyle(AdjustColumnWidths(s));
    case Setting::kAddressAugment:
      return AdjustColumnWidthsTagged(AugmentAddresses(s));
  }
  return s;
}

}  // namespace sheetvis
