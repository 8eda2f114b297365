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

#include "sheetvis/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "font_atlas.inc"
#include "sheetvis/errors.hpp"

namespace sheetvis {
namespace {

constexpr int kTextInsetPx = 2;
// Pixel height the atlas was rasterized for.
constexpr int kAtlasFontPx = 14;

std::vector<std::u32string> SplitLines(std::string_view utf8) {
  std::vector<std::u32string> lines(1);
  std::size_t i = 0;
  while (i < utf8.size()) {
    unsigned char b = static_cast<unsigned char>(utf8[i]);
    char32_t cp;
    int extra;
    if (b < 0x80) {
      cp = b;
      extra = 0;
    } else if ((b & 0xE0) == 0xC0) {
      cp = b & 0x1F;
      extra = 1;
    } else if ((b & 0xF0) == 0xE0) {
      cp = b & 0x0F;
      extra = 2;
    } else if ((b & 0xF8) == 0xF0) {
      cp = b & 0x07;
      extra = 3;
    } else {
      cp = 0xFFFD;
      extra = 0;
    }
    ++i;
    for (int k = 0; k < extra; ++k, ++i) {
      if (i >= utf8.size() ||
          (static_cast<unsigned char>(utf8[i]) & 0xC0) != 0x80) {
        cp = 0xFFFD;
        break;
      }
      cp = (cp << 6) | (static_cast<unsigned char>(utf8[i]) & 0x3F);
    }
    if (cp == '\r') {
      if (i < utf8.size() && utf8[i] == '\n') ++i;
      lines.emplace_back();
    } else if (cp == '\n') {
      lines.emplace_back();
    } else {
      lines.back().push_back(cp == '\t' ? U' ' : cp);
    }
  }
  return lines;
}

int GlyphHeight(const RenderConfig& cfg) {
  return static_cast<int>(
      std::lround(static_cast<double>(font_data::kCellHeight) *
                  cfg.font_size_px / kAtlasFontPx));
}

// Atlas slot of a code point, or -1 when the face has no glyph for it.
int GlyphIndex(char32_t cp) {
  int base = 0;
  for (const auto& range : font_data::kRanges) {
    if (cp >= range[0] && cp <= range[1]) {
      return base + static_cast<int>(cp - range[0]);
    }
    base += static_cast<int>(range[1] - range[0] + 1);
  }
  return -1;
}

struct PlacedGlyph {
  GlyphPlacement where;
  PixelRect clip;
};

std::vector<PlacedGlyph> PlaceAll(const Sheet& s, const LayoutMap& lm,
                                  const RenderConfig& cfg) {
  std::vector<PlacedGlyph> out;
  const int gh = GlyphHeight(cfg);
  const PixelRect canvas{0, 0, lm.canvas_width(), lm.canvas_height()};
  for (int r = 1; r <= s.rows(); ++r) {
    for (int c = 1; c <= s.cols(); ++c) {
      const CellData& cell = s.at(r, c);
      if (cell.IsNull()) continue;
      PixelRect rect = lm.rect(r, c);
      const TextOverflow* ov = lm.FindOverflow({r, c});
      int last_col = ov ? ov->last_col : c;
      int span_right = lm.col_x()[last_col];
      PixelRect clip{rect.x, rect.y, span_right - rect.x, rect.h};
      auto lines = SplitLines(cell.text);
      if (lines.size() > 1) {
        clip.h = canvas.h - rect.y;  // extra lines spill below the row
      }
      int top = rect.y + (rect.h - gh) / 2;
      for (std::size_t line = 0; line < lines.size(); ++line) {
        int y = top + static_cast<int>(line) * gh;
        if (y >= clip.y + clip.h) break;
        for (std::size_t k = 0; k < lines[line].size(); ++k) {
          int x = rect.x + kTextInsetPx +
                  static_cast<int>(k) * cfg.char_width_px;
          if (x >= span_right) break;
          char32_t cp = lines[line][k];
          if (cp == U' ') continue;
          out.push_back({{{r, c}, cp, cell.format.bold, x, y}, clip});
        }
      }
    }
  }
  return out;
}

std::uint8_t Blend(std::uint8_t bg, std::uint8_t fg, int alpha) {
  return static_cast<std::uint8_t>((bg * (255 - alpha) + fg * alpha + 127) /
                                   255);
}

void DrawGlyph(RgbImage& img, const PlacedGlyph& g, const RenderConfig& cfg) {
  const int cw = cfg.char_width_px;
  const int gh = GlyphHeight(cfg);
  const PixelRect& clip = g.clip;
  int index = GlyphIndex(g.where.code_point);
  auto visible = [&](int x, int y) {
    return clip.Contains(x, y) && x >= 0 && y >= 0 && x < img.width &&
           y < img.height;
  };
  if (index < 0) {
    // Hollow box for code points the face does not cover.
    int x0 = g.where.x + 1, x1 = g.where.x + cw - 2;
    int y0 = g.where.y + 3, y1 = g.where.y + gh - 4;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if ((x == x0 || x == x1 || y == y0 || y == y1) && visible(x, y)) {
          img.set(x, y, cfg.ink);
        }
      }
    }
    return;
  }
  const std::uint8_t* alpha =
      g.where.bold ? font_data::kBold[index] : font_data::kRegular[index];
  for (int dy = 0; dy < gh; ++dy) {
    int sy = dy * font_data::kCellHeight / gh;
    for (int dx = 0; dx < cw; ++dx) {
      int sx = dx * font_data::kCellWidth / cw;
      int a = alpha[sy * font_data::kCellWidth + sx];
      if (a == 0) continue;
      int x = g.where.x + dx, y = g.where.y + dy;
      if (!visible(x, y)) continue;
      Rgb bg = img.at(x, y);
      img.set(x, y, Rgb{Blend(bg.r, cfg.ink.r, a), Blend(bg.g, cfg.ink.g, a),
                        Blend(bg.b, cfg.ink.b, a)});
    }
  }
}

}  // namespace

void RenderConfig::Validate() const {
  if (char_width_px < 4) throw ConfigError("char_width_px must be >= 4");
  if (font_size_px < 4) throw ConfigError("font_size_px must be >= 4");
  if (row_height_px < font_size_px + 2) {
    throw ConfigError("row_height_px must be >= font_size_px + 2");
  }
  if (min_canvas_px < 1) throw ConfigError("min_canvas_px must be >= 1");
}

LayoutMap::LayoutMap(std::vector<int> col_x, std::vector<int> row_y,
                     int canvas_width, int canvas_height,
                     std::vector<TextOverflow> overflow)
    : col_x_(std::move(col_x)),
      row_y_(std::move(row_y)),
      canvas_width_(canvas_width),
      canvas_height_(canvas_height),
      overflow_(std::move(overflow)) {}

PixelRect LayoutMap::rect(int row, int col) const {
  if (row < 1 || col < 1 || row > rows() || col > cols()) {
    throw BoundsError("layout has no cell (" + std::to_string(row) + "," +
                      std::to_string(col) + ")");
  }
  return PixelRect{col_x_[col - 1], row_y_[row - 1],
                   col_x_[col] - col_x_[col - 1],
                   row_y_[row] - row_y_[row - 1]};
}

const TextOverflow* LayoutMap::FindOverflow(CellAddress a) const {
  auto it = std::lower_bound(
      overflow_.begin(), overflow_.end(), a,
      [](const TextOverflow& o, CellAddress key) { return o.cell < key; });
  return it != overflow_.end() && it->cell == a ? &*it : nullptr;
}

nlohmann::json LayoutMap::ToJson() const {
  nlohmann::json rects = nlohmann::json::array();
  for (int r = 1; r <= rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 1; c <= cols(); ++c) {
      PixelRect p = rect(r, c);
      row.push_back({p.x, p.y, p.w, p.h});
    }
    rects.push_back(std::move(row));
  }
  nlohmann::json spill = nlohmann::json::array();
  for (const TextOverflow& o : overflow_) {
    spill.push_back({{"cell", ToA1(o.cell)},
                     {"last_col", o.last_col},
                     {"clipped", o.clipped},
                     {"multiline", o.multiline}});
  }
  return {{"image_width", image_width()},
          {"image_height", image_height()},
          {"canvas_width", canvas_width_},
          {"canvas_height", canvas_height_},
          {"col_x", col_x_},
          {"row_y", row_y_},
          {"cell_rects", std::move(rects)},
          {"overflow", std::move(spill)}};
}

LayoutMap Layout(const Sheet& s, const RenderConfig& cfg) {
  cfg.Validate();
  std::vector<int> col_x{0};
  for (int c = 1; c <= s.cols(); ++c) {
    long w = std::max(1L, std::lround(s.col_width(c) * cfg.char_width_px));
    if (col_x.back() + w > kMaxImageDimension) {
      throw OversizeError("sheet is wider than " +
                          std::to_string(kMaxImageDimension) + " px");
    }
    col_x.push_back(col_x.back() + static_cast<int>(w));
  }
  long row_h = std::max(1L, std::lround(s.row_height() * cfg.row_height_px));
  if (row_h * s.rows() > kMaxImageDimension) {
    throw OversizeError("sheet is taller than " +
                        std::to_string(kMaxImageDimension) + " px (" +
                        std::to_string(row_h * s.rows()) + ")");
  }
  std::vector<int> row_y{0};
  for (int r = 1; r <= s.rows(); ++r) {
    row_y.push_back(row_y.back() + static_cast<int>(row_h));
  }

  std::vector<TextOverflow> overflow;
  for (int r = 1; r <= s.rows(); ++r) {
    for (int c = 1; c <= s.cols(); ++c) {
      const CellData& cell = s.at(r, c);
      if (cell.IsNull()) continue;
      auto lines = SplitLines(cell.text);
      std::size_t widest = 0;
      for (const auto& l : lines) widest = std::max(widest, l.size());
      int need = kTextInsetPx + static_cast<int>(widest) * cfg.char_width_px;
      int avail = col_x[c] - col_x[c - 1];
      int last = c;
      while (avail < need && last < s.cols() && s.at(r, last + 1).IsNull()) {
        ++last;
        avail += col_x[last] - col_x[last - 1];
      }
      bool multiline = lines.size() > 1;
      if (last != c || avail < need || multiline) {
        overflow.push_back({{r, c}, last, avail < need, multiline});
      }
    }
  }
  int w = col_x.back(), h = row_y.back();
  return LayoutMap(std::move(col_x), std::move(row_y),
                   std::max(w, cfg.min_canvas_px),
                   std::max(h, cfg.min_canvas_px), std::move(overflow));
}

RgbImage::RgbImage(int w, int h, Rgb fill) : width(w), height(h) {
  pixels.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill.r;
    pixels[i + 1] = fill.g;
    pixels[i + 2] = fill.b;
  }
}

Rgb RgbImage::at(int x, int y) const {
  std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return Rgb{pixels[i], pixels[i + 1], pixels[i + 2]};
}

void RgbImage::set(int x, int y, Rgb c) {
  std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  pixels[i] = c.r;
  pixels[i + 1] = c.g;
  pixels[i + 2] = c.b;
}

std::vector<GlyphPlacement> PlaceGlyphs(const Sheet& s, const LayoutMap& lm,
                                        const RenderConfig& cfg) {
  std::vector<GlyphPlacement> out;
  for (const PlacedGlyph& g : PlaceAll(s, lm, cfg)) out.push_back(g.where);
  return out;
}

RgbImage RenderPixels(const Sheet& s, const LayoutMap& lm,
                      const RenderConfig& cfg) {
  cfg.Validate();
  if (lm.rows() != s.rows() || lm.cols() != s.cols()) {
    throw BoundsError("layout does not match sheet");
  }
  RgbImage img(lm.canvas_width(), lm.canvas_height(), cfg.background);

  auto fill_rect = [&img](PixelRect r, Rgb c) {
    for (int y = r.y; y < r.y + r.h; ++y) {
      for (int x = r.x; x < r.x + r.w; ++x) img.set(x, y, c);
    }
  };

  for (int r = 1; r <= s.rows(); ++r) {
    for (int c = 1; c <= s.cols(); ++c) {
      const auto& fill = s.at(r, c).format.fill;
      if (fill) fill_rect(lm.rect(r, c), *fill);
    }
  }

  for (const PlacedGlyph& g : PlaceAll(s, lm, cfg)) DrawGlyph(img, g, cfg);

  std::vector<std::uint8_t> border_mask(
      static_cast<std::size_t>(img.width) * img.height, 0);
  auto border_px = [&](int x, int y) {
    img.set(x, y, cfg.ink);
    border_mask[static_cast<std::size_t>(y) * img.width + x] = 1;
  };
  for (int r = 1; r <= s.rows(); ++r) {
    for (int c = 1; c <= s.cols(); ++c) {
      const CellFormat& f = s.at(r, c).format;
      PixelRect p = lm.rect(r, c);
      if (f.border_top) {
        for (int x = p.x; x < p.x + p.w; ++x) border_px(x, p.y);
      }
      if (f.border_bottom) {
        for (int x = p.x; x < p.x + p.w; ++x) border_px(x, p.y + p.h - 1);
      }
      if (f.border_left) {
        for (int y = p.y; y < p.y + p.h; ++y) border_px(p.x, y);
      }
      if (f.border_right) {
        for (int y = p.y; y < p.y + p.h; ++y) border_px(p.x + p.w - 1, y);
      }
    }
  }

  if (cfg.grid_lines) {
    // Vertical edges crossed by run-on text carry no grid line.
    std::vector<std::uint8_t> spanned(
        static_cast<std::size_t>(s.rows()) * s.cols(), 0);
    for (const TextOverflow& o : lm.overflow()) {
      for (int c = o.cell.col; c < o.last_col; ++c) {
        spanned[static_cast<std::size_t>(o.cell.row - 1) * s.cols() + c - 1] = 1;
      }
    }
    auto grid_px = [&](int x, int y) {
      if (!border_mask[static_cast<std::size_t>(y) * img.width + x]) {
        img.set(x, y, cfg.grid_color);
      }
    };
    for (int r = 1; r <= s.rows(); ++r) {
      for (int c = 1; c <= s.cols(); ++c) {
        PixelRect p = lm.rect(r, c);
        const CellFormat& f = s.at(r, c).format;
        bool right_border =
            f.border_right ||
            (c < s.cols() && s.at(r, c + 1).format.border_left);
        bool bottom_border =
            f.border_bottom ||
            (r < s.rows() && s.at(r + 1, c).format.border_top);
        bool crossed =
            spanned[static_cast<std::size_t>(r - 1) * s.cols() + c - 1] != 0;
        if (!right_border && !crossed) {
          for (int y = p.y; y < p.y + p.h; ++y) grid_px(p.x + p.w - 1, y);
        }
        if (!bottom_border) {
          for (int x = p.x; x < p.x + p.w; ++x) grid_px(x, p.y + p.h - 1);
        }
      }
    }
  }
  return img;
}

std::vector<std::uint8_t> Rasterize(const Sheet& s, const LayoutMap& lm,
                                    const RenderConfig& cfg) {
  return EncodePng(RenderPixels(s, lm, cfg));
}

std::vector<std::uint8_t> EncodePng(const RgbImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(),
                                 0, nullptr)) {
    throw ImageFormatError(std::string("png encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0,
                                 img.pixels.data(), 0, nullptr)) {
    throw ImageFormatError(std::string("png encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

RgbImage DecodePng(std::span<const std::uint8_t> png) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, png.data(), png.size())) {
    throw ImageFormatError(std::string("not a PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RgbImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw ImageFormatError(std::string("png decode failed: ") + image.message);
  }
  return out;
}

ImageValidation ValidateImage(std::span<const std::uint8_t> png) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, png.data(), png.size())) {
    throw ImageFormatError(std::string("not a PNG: ") + image.message);
  }
  ImageValidation v;
  v.byte_size = png.size();
  v.width = static_cast<int>(image.width);
  v.height = static_cast<int>(image.height);
  png_image_free(&image);
  if (v.byte_size >= kMaxImageBytes) {
    v.failures.push_back("file size " + std::to_string(v.byte_size) +
                         " bytes is not below " +
                         std::to_string(kMaxImageBytes));
  }
  auto check_dim = [&v](const char* what, int d) {
    if (d < kMinImageDimension || d > kMaxImageDimension) {
      v.failures.push_back(std::string(what) + " " + std::to_string(d) +
                           " px outside [" +
                           std::to_string(kMinImageDimension) + ", " +
                           std::to_string(kMaxImageDimension) + "]");
    }
  };
  check_dim("width", v.width);
  check_dim("height", v.height);
  v.ok = v.failures.empty();
  return v;
}

}  // namespace sheetvis
