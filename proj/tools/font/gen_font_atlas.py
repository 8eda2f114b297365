#!/usr/bin/env python3
# Copyright 2026 The sheetvis Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Rasterizes DejaVu Sans Mono (regular + bold) into the 8-bit alpha atlas
compiled into the renderer. Output is committed; rerun only to change the
face or the covered code points.

    python3 tools/font/gen_font_atlas.py \
        /usr/share/fonts/truetype/dejavu > core/src/font_atlas.inc
"""
import sys
from PIL import Image, ImageDraw, ImageFont

CELL_W = 8
CELL_H = 17
POINT_SIZE = 13
RANGES = [(0x20, 0x7E), (0xA0, 0xFF)]


def glyphs(path):
  font = ImageFont.truetype(path, POINT_SIZE)
  out = []
  for lo, hi in RANGES:
    for cp in range(lo, hi + 1):
      img = Image.new("L", (CELL_W, CELL_H), 0)
      ImageDraw.Draw(img).text((0, 0), chr(cp), fill=255, font=font)
      out.append((cp, img.tobytes()))
  return out


def emit(name, data):
  print(f"inline constexpr std::uint8_t {name}[][{CELL_W * CELL_H}] = {{")
  for cp, px in data:
    print(f"    {{  // U+{cp:04X}")
    for row in range(CELL_H):
      vals = ", ".join(str(v) for v in px[row * CELL_W:(row + 1) * CELL_W])
      print(f"        {vals},")
    print("    },")
  print("};")


def main():
  base = sys.argv[1] if len(sys.argv) > 1 else "/usr/share/fonts/truetype/dejavu"
  regular = glyphs(f"{base}/DejaVuSansMono.ttf")
  bold = glyphs(f"{base}/DejaVuSansMono-Bold.ttf")
  print("// Generated by tools/font/gen_font_atlas.py from DejaVu Sans Mono")
  print("// (Bitstream Vera / DejaVu font license). Do not edit.")
  print("#pragma once")
  print("#include <cstdint>")
  print("namespace sheetvis::font_data {")
  print(f"inline constexpr int kCellWidth = {CELL_W};")
  print(f"inline constexpr int kCellHeight = {CELL_H};")
  print(f"inline constexpr int kGlyphCount = {len(regular)};")
  print("inline constexpr std::uint32_t kRanges[][2] = {")
  for lo, hi in RANGES:
    print(f"    {{0x{lo:X}, 0x{hi:X}}},")
  print("};")
  emit("kRegular", regular)
  emit("kBold", bold)
  print("}  // namespace sheetvis::font_data")


if __name__ == "__main__":
  main()
