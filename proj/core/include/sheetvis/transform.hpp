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

// Spreadsheet-to-image preprocessing settings. Each is a pure Sheet -> Sheet
// function; none changes the grid shape or border flags.

#ifndef SHEETVIS_TRANSFORM_HPP_
#define SHEETVIS_TRANSFORM_HPP_

#include <array>
#include <string>
#include <string_view>

#include "sheetvis/sheet.hpp"

namespace sheetvis {

enum class Setting { kVanilla, kColWidthAdjust, kStyleChange, kAddressAugment };

inline constexpr std::array<Setting, 4> kAllSettings = {
    Setting::kVanilla, Setting::kColWidthAdjust, Setting::kStyleChange,
    Setting::kAddressAugment};

// "vanilla", "colwidth_adjust", "style_change", "address_augment".
std::string_view SettingName(Setting s);
// Throws ConfigError for unknown names.
Setting SettingFromName(std::string_view name);

// Longest content prefix that counts toward a fitted column width.
inline constexpr int kWidthCapChars = 15;
inline constexpr int kWidthPadChars = 1;
inline constexpr int kMinFittedWidth = 4;

// Number of Unicode scalar values in UTF-8 `text`. Invalid bytes count as
// one scalar each.
int DisplayLength(std::string_view text);

// Sets each column width to the longest cell text in it, capped at 15
// characters, plus one padding character, never below 4.
Sheet AdjustColumnWidths(const Sheet& s);

// Like AdjustColumnWidths for sheets whose texts carry an "A1, " address
// tag: the cap grows by each cell's tag length so tags are never cut.
Sheet AdjustColumnWidthsTagged(const Sheet& s);

// Clears bold and fill on every cell; borders are kept.
Sheet NormalizeStyle(const Sheet& s);

// Prefixes every non-null cell with its A1 address and ", ": "A1, day".
// Not idempotent.
Sheet AugmentAddresses(const Sheet& s);

// Vanilla: identity. ColWidthAdjust: fitted widths. StyleChange: fitted
// widths, then style normalization. AddressAugment: tagging, then fitted
// widths computed on the tagged text. Expects an untransformed sheet.
Sheet ApplySetting(const Sheet& s, Setting setting);

}  // namespace sheetvis

#endif  // SHEETVIS_TRANSFORM_HPP_
