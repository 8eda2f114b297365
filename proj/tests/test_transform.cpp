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

#include "sheetvis/errors.hpp"
#include "sheetvis/transform.hpp"

namespace sheetvis {
namespace {

Sheet Styled() {
  Sheet s(3, 3);
  s.at(1, 1).text = "day";
  s.at(2, 1).text = "total";
  s.at(1, 2).text = std::string(40, 'x');
  s.at(1, 1).format.bold = true;
  s.at(1, 1).format.fill = Rgb{0xFF, 0xFF, 0x00};
  s.at(2, 2).format.border_top = true;
  s.at(2, 2).format.border_left = true;
  s.at(2, 3).text = "5";
  return s;
}

TEST(AdjustColumnWidthsTest, Examples) {
  Sheet s = AdjustColumnWidths(Styled());
  EXPECT_DOUBLE_EQ(s.col_width(1), 6);   // max(3,5)+1
  EXPECT_DOUBLE_EQ(s.col_width(2), 16);  // 40 chars capped at 15, +1
  Sheet empty_col(2, 2);
  empty_col.at(1, 1).text = "abc";
  EXPECT_DOUBLE_EQ(AdjustColumnWidths(empty_col).col_width(2), 4);
}

TEST(AdjustColumnWidthsTest, CountsCodePointsAndLeavesContentAlone) {
  Sheet s(1, 1);
  s.at(1, 1).text = "Ärger über";  // 10 code points, 12 bytes
  EXPECT_EQ(DisplayLength(s.at(1, 1).text), 10);
  Sheet out = AdjustColumnWidths(s);
  EXPECT_DOUBLE_EQ(out.col_width(1), 11);
  EXPECT_EQ(out.at(1, 1), s.at(1, 1));
}

TEST(NormalizeStyleTest, Examples) {
  Sheet s = NormalizeStyle(Styled());
  EXPECT_EQ(s.at(1, 1).text, "day");
  EXPECT_FALSE(s.at(1, 1).format.bold);
  EXPECT_FALSE(s.at(1, 1).format.fill.has_value());
  EXPECT_EQ(s.at(2, 2).format, Styled().at(2, 2).format);
  EXPECT_EQ(NormalizeStyle(s), s);
}

TEST(AugmentAddressesTest, Examples) {
  Sheet s = AugmentAddresses(Styled());
  EXPECT_EQ(s.at(1, 1).text, "A1, day");
  EXPECT_EQ(s.at(2, 3).text, "C2, 5");
  EXPECT_EQ(s.at(3, 2).text, "");
  EXPECT_EQ(s.at(2, 2).text, "");
  EXPECT_TRUE(s.at(1, 1).format.bold);
}

TEST(ApplySettingTest, Composition) {
  Sheet in = Styled();
  EXPECT_EQ(ApplySetting(in, Setting::kVanilla), in);
  EXPECT_EQ(ApplySetting(in, Setting::kColWidthAdjust), AdjustColumnWidths(in));
  EXPECT_EQ(ApplySetting(in, Setting::kStyleChange),
            NormalizeStyle(AdjustColumnWidths(in)));

  Sheet aug = ApplySetting(in, Setting::kAddressAugment);
  EXPECT_EQ(aug, AdjustColumnWidthsTagged(AugmentAddresses(in)));
}

TEST(ApplySettingTest, TaggedWidthsExtendTheCap) {
  Sheet in = Styled();
  Sheet aug = ApplySetting(in, Setting::kAddressAugment);
  // Column A: "A1, day" (7) and "A2, total" (9) -> 10.
  EXPECT_DOUBLE_EQ(aug.col_width(1), 10);
  // Column B: "B1, " + 40 chars, capped at 15 + 4 -> 19, +1 = 20.
  EXPECT_DOUBLE_EQ(aug.col_width(2), 20);
  EXPECT_TRUE(aug.at(1, 1).format.bold);
  EXPECT_EQ(aug.rows(), in.rows());
  EXPECT_EQ(aug.cols(), in.cols());
}

TEST(SettingNameTest, RoundTrip) {
  for (Setting s : kAllSettings) EXPECT_EQ(SettingFromName(SettingName(s)), s);
  EXPECT_THROW(SettingFromName("sepia"), ConfigError);
}

}  // namespace
}  // namespace sheetvis
