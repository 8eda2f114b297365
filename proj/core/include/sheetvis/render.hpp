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

// Deterministic sheet rasterizer.
//
// Text is drawn with one embedded monospaced face (regular and bold) using a
// fixed advance of `char_width_px` per Unicode scalar value, so a column of
// width w characters holds exactly w glyphs. Text wider than its cell runs on
// into consecutive empty cells to the right and is clipped at the first
// non-empty cell or the sheet edge, as spreadsheet applications do.
//
// No row or column headings are drawn: the picture carries no address cues.

#ifndef SHEETVIS_RENDER_HPP_
#define SHEETVIS_RENDER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sheetvis/sheet.hpp"

namespace sheetvis {

// Maximum model-input image constraints.
inline constexpr int kMinImageDimension = 50;
inline constexpr int kMaxImageDimension = 10'000;
inline constexpr std::size_t kMaxImageBytes = 4u * 1024 * 1024;

struct RenderConfig {
  int char_width_px = 8;
  int row_height_px = 20;
  int font_size_px = 14;
  bool grid_lines = true;
  // The canvas is padded with background up to this size in each dimension.
  int min_canvas_px = kMinImageDimension;
  Rgb background{0xFF, 0xFF, 0xFF};
  Rgb grid_color{0xD9, 0xD9, 0xD9};
  Rgb ink{0x00, 0x00, 0x00};

  // Throws ConfigError: char_width_px >= 4, row_height_px >= font + 2.
  void Validate() const;
};

struct PixelRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool Contains(int px, int py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

// A cell whose text does not fit its own rectangle.
struct TextOverflow {
  CellAddress cell;
  int last_col = 0;       // rightmost column the text is drawn into
  bool clipped = false;   // text cut at a non-empty cell or the sheet edge
  bool multiline = false; // contains line breaks drawn below the row

  friend bool operator==(const TextOverflow&, const TextOverflow&) = default;
};

class LayoutMap {
 public:
  LayoutMap() = default;
  LayoutMap(std::vector<int> col_x, std::vector<int> row_y, int canvas_width,
            int canvas_height, std::vector<TextOverflow> overflow);

  int rows() const { return static_cast<int>(row_y_.size()) - 1; }
  int cols() const { return static_cast<int>(col_x_.size()) - 1; }
  PixelRect rect(int row, int col) const;
  PixelRect rect(CellAddress a) const { return rect(a.row, a.col); }

  // Extent of the cell grid. Rectangles tile [0,w) x [0,h) exactly.
  int image_width() const { return col_x_.back(); }
  int image_height() const { return row_y_.back(); }
  // Size of the emitted picture (grid plus background padding).
  int canvas_width() const { return canvas_width_; }
  int canvas_height() const { return canvas_height_; }

  // Column x-offsets as prefix sums; size cols()+1.
  const std::vector<int>& col_x() const { return col_x_; }
  const std::vector<int>& row_y() const { return row_y_; }
  const std::vector<TextOverflow>& overflow() const { return overflow_; }
  const TextOverflow* FindOverflow(CellAddress a) const;

  nlohmann::json ToJson() const;

 private:
  std::vector<int> col_x_{0};
  std::vector<int> row_y_{0};
  int canvas_width_ = 0;
  int canvas_height_ = 0;
  std::vector<TextOverflow> overflow_;
};

// Throws OversizeError when the grid exceeds kMaxImageDimension pixels in
// either direction.
LayoutMap Layout(const Sheet& s, const RenderConfig& cfg = {});

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB8

  RgbImage() = default;
  RgbImage(int w, int h, Rgb fill);
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
};

// Where one glyph is drawn. The anchor is the top-left pixel of the glyph
// box; `source` is the cell whose text it belongs to.
struct GlyphPlacement {
  CellAddress source;
  char32_t code_point = 0;
  bool bold = false;
  int x = 0;
  int y = 0;
};

// Glyph positions in paint order, after clipping (glyphs that would start
// outside the visible span are omitted).
std::vector<GlyphPlacement> PlaceGlyphs(const Sheet& s, const LayoutMap& lm,
                                        const RenderConfig& cfg = {});

RgbImage RenderPixels(const Sheet& s, const LayoutMap& lm,
                      const RenderConfig& cfg = {});

// PNG, RGB8, non-interlaced. Identical inputs yield identical bytes.
std::vector<std::uint8_t> Rasterize(const Sheet& s, const LayoutMap& lm,
                                    const RenderConfig& cfg = {});

std::vector<std::uint8_t> EncodePng(const RgbImage& img);
// Throws ImageFormatError.
RgbImage DecodePng(std::span<const std::uint8_t> png);

struct ImageValidation {
  bool ok = false;
  std::size_t byte_size = 0;
  int width = 0;
  int height = 0;
  std::vector<std::string> failures;  // one line per violated constraint
};

// Passes iff the file is under 4 MiB and both dimensions lie in
// [50, 10000]. Throws ImageFormatError for undecodable bytes.
ImageValidation ValidateImage(std::span<const std::uint8_t> png);

}  // namespace sheetvis

#endif  // SHEETVIS_RENDER_HPP_
