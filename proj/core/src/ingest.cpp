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

#include "sheetvis/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

#include "number_format.hpp"
#include "sheetvis/errors.hpp"
#include "xml_dom.hpp"
#include "zip_reader.hpp"

namespace sheetvis {

using internal::XmlNode;
using nlohmann::json;

namespace {

constexpr Rgb kFallbackGray{0xCC, 0xCC, 0xCC};
constexpr std::size_t kMaxDenseCells = 5'000'000;

// ---------------------------------------------------------------------------
// Colors

// The legacy 64-entry indexed palette.
constexpr std::uint32_t kIndexedPalette[64] = {
    0x000000, 0xFFFFFF, 0xFF0000, 0x00FF00, 0x0000FF, 0xFFFF00, 0xFF00FF,
    0x00FFFF, 0x000000, 0xFFFFFF, 0xFF0000, 0x00FF00, 0x0000FF, 0xFFFF00,
    0xFF00FF, 0x00FFFF, 0x800000, 0x008000, 0x000080, 0x808000, 0x800080,
    0x008080, 0xC0C0C0, 0x808080, 0x9999FF, 0x993366, 0xFFFFCC, 0xCCFFFF,
    0x660066, 0xFF8080, 0x0066CC, 0xCCCCFF, 0x000080, 0xFF00FF, 0xFFFF00,
    0x00FFFF, 0x800080, 0x800000, 0x008080, 0x0000FF, 0x00CCFF, 0xCCFFFF,
    0xCCFFCC, 0xFFFF99, 0x99CCFF, 0xFF99CC, 0xCC99FF, 0xFFCC99, 0x3366FF,
    0x33CCCC, 0x99CC00, 0xFFCC00, 0xFF9900, 0xFF6600, 0x666699, 0x969696,
    0x003366, 0x339966, 0x003300, 0x333300, 0x993300, 0x993366, 0x333399,
    0x333333};

Rgb FromPacked(std::uint32_t v) {
  return Rgb{static_cast<std::uint8_t>((v >> 16) & 0xFF),
             static_cast<std::uint8_t>((v >> 8) & 0xFF),
             static_cast<std::uint8_t>(v & 0xFF)};
}

// Applies an OOXML tint to the HSL lightness of `c`.
Rgb ApplyTint(Rgb c, double tint) {
  if (tint == 0) return c;
  double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  double l = (mx + mn) / 2;
  double h = 0, s = 0;
  if (mx != mn) {
    double d = mx - mn;
    s = l > 0.5 ? d / (2 - mx - mn) : d / (mx + mn);
    if (mx == r) {
      h = (g - b) / d + (g < b ? 6 : 0);
    } else if (mx == g) {
      h = (b - r) / d + 2;
    } else {
      h = (r - g) / d + 4;
    }
    h /= 6;
  }
  l = tint < 0 ? l * (1 + tint) : l * (1 - tint) + tint;
  auto hue = [](double p, double q, double t) {
    if (t < 0) t += 1;
    if (t > 1) t -= 1;
    if (t < 1.0 / 6) return p + (q - p) * 6 * t;
    if (t < 0.5) return q;
    if (t < 2.0 / 3) return p + (q - p) * (2.0 / 3 - t) * 6;
    return p;
  };
  double rr, gg, bb;
  if (s == 0) {
    rr = gg = bb = l;
  } else {
    double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
    double p = 2 * l - q;
    rr = hue(p, q, h + 1.0 / 3);
    gg = hue(p, q, h);
    bb = hue(p, q, h - 1.0 / 3);
  }
  auto to8 = [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255));
  };
  return Rgb{to8(rr), to8(gg), to8(bb)};
}

// ---------------------------------------------------------------------------
// Package helpers

std::string DirName(const std::string& part) {
  auto slash = part.rfind('/');
  return slash == std::string::npos ? "" : part.substr(0, slash + 1);
}

// Resolves a relationship target against the directory of its source part.
std::string ResolveTarget(const std::string& source_part,
                          const std::string& target) {
  std::string joined =
      !target.empty() && target[0] == '/' ? target.substr(1)
                                          : DirName(source_part) + target;
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= joined.size()) {
    auto slash = joined.find('/', start);
    std::string seg = joined.substr(
        start, slash == std::string::npos ? std::string::npos : slash - start);
    if (seg == "..") {
      if (!parts.empty()) parts.pop_back();
    } else if (!seg.empty() && seg != ".") {
      parts.push_back(seg);
    }
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '/';
    out += parts[i];
  }
  return out;
}

std::string RelsPathFor(const std::string& part) {
  auto slash = part.rfind('/');
  std::string dir = slash == std::string::npos ? "" : part.substr(0, slash + 1);
  std::string file = slash == std::string::npos ? part : part.substr(slash + 1);
  return dir + "_rels/" + file + ".rels";
}

struct Relationship {
  std::string target;  // resolved part name
  std::string type;
};

std::map<std::string, Relationship> ReadRels(const internal::ZipArchive& zip,
                                             const std::string& part) {
  std::map<std::string, Relationship> out;
  auto doc = zip.Read(RelsPathFor(part));
  if (!doc) return out;
  auto root = internal::ParseXml(*doc, RelsPathFor(part));
  for (const XmlNode* rel : root->Children("Relationship")) {
    if (rel->Attr("TargetMode") == "External") continue;
    out[rel->Attr("Id")] = {ResolveTarget(part, rel->Attr("Target")),
                            rel->Attr("Type")};
  }
  return out;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool TruthyAttr(const XmlNode* n, std::string_view attr, bool when_missing) {
  if (!n) return false;
  if (!n->HasAttr(attr)) return when_missing;
  std::string v = n->Attr(attr);
  return v == "1" || v == "true";
}

// ---------------------------------------------------------------------------
// Styles

struct StyleTable {
  std::vector<CellFormat> xf_formats;
  std::vector<std::string> xf_number_codes;
};

class ColorResolver {
 public:
  ColorResolver(std::vector<Rgb> theme, std::vector<std::string>* warnings)
      : theme_(std::move(theme)), warnings_(warnings) {}

  // Returns nullopt for "automatic"/absent colors.
  std::optional<Rgb> Resolve(const XmlNode* color, const std::string& where) {
    if (!color) return std::nullopt;
    double tint = 0;
    if (color->HasAttr("tint")) tint = std::stod(color->Attr("tint"));
    if (color->HasAttr("rgb")) {
      std::string argb = color->Attr("rgb");
      try {
        if (argb.size() == 8) return ApplyTint(RgbFromHex(argb.substr(2)), tint);
        return ApplyTint(RgbFromHex(argb), tint);
      } catch (const ParseError&) {
        return Fallback(where, "bad rgb " + argb);
      }
    }
    if (color->HasAttr("theme")) {
      std::size_t idx = std::stoul(color->Attr("theme"));
      // Theme indices 0-3 swap the light/dark pairs of the scheme order.
      static constexpr std::size_t kRemap[] = {1, 0, 3, 2};
      std::size_t scheme = idx < 4 ? kRemap[idx] : idx;
      if (scheme < theme_.size()) return ApplyTint(theme_[scheme], tint);
      return Fallback(where, "theme color " + std::to_string(idx));
    }
    if (color->HasAttr("indexed")) {
      std::size_t idx = std::stoul(color->Attr("indexed"));
      if (idx < 64) return ApplyTint(FromPacked(kIndexedPalette[idx]), tint);
      if (idx == 64) return std::nullopt;  // system foreground: automatic
      return Fallback(where, "indexed color " + std::to_string(idx));
    }
    return std::nullopt;
  }

 private:
  Rgb Fallback(const std::string& where, const std::string& why) {
    if (warnings_) {
      warnings_->push_back(where + ": unresolvable " + why +
                           ", using fallback gray");
    }
    return kFallbackGray;
  }

  std::vector<Rgb> theme_;
  std::vector<std::string>* warnings_;
};

// Scheme order: dk1 lt1 dk2 lt2 accent1..6 hlink folHlink.
std::vector<Rgb> ReadTheme(const internal::ZipArchive& zip,
                           const std::string& part) {
  std::vector<Rgb> out;
  auto doc = zip.Read(part);
  if (!doc) return out;
  auto root = internal::ParseXml(*doc, part);
  const XmlNode* elems = root->Child("themeElements");
  const XmlNode* scheme = elems ? elems->Child("clrScheme") : nullptr;
  if (!scheme) return out;
  for (const char* name : {"dk1", "lt1", "dk2", "lt2", "accent1", "accent2",
                           "accent3", "accent4", "accent5", "accent6", "hlink",
                           "folHlink"}) {
    const XmlNode* slot = scheme->Child(name);
    Rgb c = kFallbackGray;
    if (slot) {
      if (const XmlNode* s = slot->Child("srgbClr")) {
        c = RgbFromHex(s->Attr("val", "CCCCCC"));
      } else if (const XmlNode* sys = slot->Child("sysClr")) {
        c = RgbFromHex(sys->Attr("lastClr", std::string(name) == "dk1"
                                                ? "000000"
                                                : "FFFFFF"));
      }
    }
    out.push_back(c);
  }
  return out;
}

StyleTable ReadStyles(const internal::ZipArchive& zip, const std::string& part,
                      ColorResolver& colors) {
  StyleTable table;
  auto doc = zip.Read(part);
  if (!doc) return table;
  auto root = internal::ParseXml(*doc, part);

  std::map<int, std::string> custom_codes;
  if (const XmlNode* fmts = root->Child("numFmts")) {
    for (const XmlNode* f : fmts->Children("numFmt")) {
      custom_codes[std::stoi(f->Attr("numFmtId", "0"))] = f->Attr("formatCode");
    }
  }

  std::vector<bool> font_bold;
  if (const XmlNode* fonts = root->Child("fonts")) {
    for (const XmlNode* f : fonts->Children("font")) {
      font_bold.push_back(TruthyAttr(f->Child("b"), "val", true));
    }
  }

  std::vector<std::optional<Rgb>> fills;
  if (const XmlNode* fill_list = root->Child("fills")) {
    int i = 0;
    for (const XmlNode* f : fill_list->Children("fill")) {
      std::optional<Rgb> color;
      std::string where = "styles fill " + std::to_string(i++);
      if (const XmlNode* pattern = f->Child("patternFill")) {
        std::string type = pattern->Attr("patternType", "none");
        if (type != "none") {
          const XmlNode* fg = pattern->Child("fgColor");
          color = colors.Resolve(fg, where);
          if (!color && type == "solid") color = Rgb{0, 0, 0};
          if (!color) color = colors.Resolve(pattern->Child("bgColor"), where);
        }
      } else if (const XmlNode* grad = f->Child("gradientFill")) {
        if (const XmlNode* stop = grad->Child("stop")) {
          color = colors.Resolve(stop->Child("color"), where);
        }
      }
      fills.push_back(color);
    }
  }

  struct Borders {
    bool top = false, bottom = false, left = false, right = false;
  };
  std::vector<Borders> borders;
  if (const XmlNode* list = root->Child("borders")) {
    for (const XmlNode* b : list->Children("border")) {
      auto present = [b](const char* side) {
        const XmlNode* s = b->Child(side);
        if (!s) return false;
        std::string style = s->Attr("style", "none");
        return !style.empty() && style != "none";
      };
      Borders out;
      out.top = present("top");
      out.bottom = present("bottom");
      out.left = present("left") || present("start");
      out.right = present("right") || present("end");
      borders.push_back(out);
    }
  }

  if (const XmlNode* xfs = root->Child("cellXfs")) {
    for (const XmlNode* xf : xfs->Children("xf")) {
      CellFormat f;
      std::size_t font_id = std::stoul(xf->Attr("fontId", "0"));
      std::size_t fill_id = std::stoul(xf->Attr("fillId", "0"));
      std::size_t border_id = std::stoul(xf->Attr("borderId", "0"));
      int num_id = std::stoi(xf->Attr("numFmtId", "0"));
      if (font_id < font_bold.size()) f.bold = font_bold[font_id];
      if (fill_id < fills.size()) f.fill = fills[fill_id];
      if (border_id < borders.size()) {
        f.border_top = borders[border_id].top;
        f.border_bottom = borders[border_id].bottom;
        f.border_left = borders[border_id].left;
        f.border_right = borders[border_id].right;
      }
      std::string code = "General";
      if (auto it = custom_codes.find(num_id); it != custom_codes.end()) {
        code = it->second;
      } else if (auto builtin = internal::BuiltinFormatCode(num_id)) {
        code = *builtin;
      }
      table.xf_formats.push_back(f);
      table.xf_number_codes.push_back(code);
    }
  }
  return table;
}

std::vector<std::string> ReadSharedStrings(const internal::ZipArchive& zip,
                                           const std::string& part) {
  std::vector<std::string> out;
  auto doc = zip.Read(part);
  if (!doc) return out;
  auto root = internal::ParseXml(*doc, part);
  for (const XmlNode* si : root->Children("si")) {
    std::string text;
    if (const XmlNode* t = si->Child("t")) text = t->text;
    for (const XmlNode* run : si->Children("r")) {
      if (const XmlNode* t = run->Child("t")) text += t->text;
    }
    out.push_back(std::move(text));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Worksheets

std::string InlineText(const XmlNode* is) {
  if (!is) return "";
  std::string text;
  if (const XmlNode* t = is->Child("t")) text = t->text;
  for (const XmlNode* run : is->Children("r")) {
    if (const XmlNode* t = run->Child("t")) text += t->text;
  }
  return text;
}

struct RawCell {
  CellAddress addr;
  std::string text;
  std::size_t style = 0;
};

NamedSheet ReadWorksheet(const internal::ZipArchive& zip,
                         const std::string& part, const std::string& name,
                         const std::vector<std::string>& shared,
                         const StyleTable& styles,
                         std::vector<std::string>& warnings) {
  auto doc = zip.Read(part);
  if (!doc) throw IngestError("missing worksheet part " + part);
  auto root = internal::ParseXml(*doc, part);

  double default_width = kDefaultColumnWidth;
  if (const XmlNode* fmt = root->Child("sheetFormatPr")) {
    if (fmt->HasAttr("defaultColWidth")) {
      default_width = std::stod(fmt->Attr("defaultColWidth"));
    }
  }
  std::map<int, double> widths;
  if (const XmlNode* cols = root->Child("cols")) {
    for (const XmlNode* col : cols->Children("col")) {
      int lo = std::stoi(col->Attr("min", "1"));
      int hi = std::min(std::stoi(col->Attr("max", "1")), 16384);
      double w = col->HasAttr("width") ? std::stod(col->Attr("width"))
                                       : default_width;
      if (!(w > 0)) w = default_width;
      for (int c = lo; c <= hi; ++c) widths[c] = w;
    }
  }

  std::vector<RawCell> raw;
  int max_row = 1, max_col = 1;
  if (const XmlNode* data = root->Child("sheetData")) {
    int next_row = 1;
    for (const XmlNode* row : data->Children("row")) {
      int r = row->HasAttr("r") ? std::stoi(row->Attr("r")) : next_row;
      next_row = r + 1;
      int next_col = 1;
      for (const XmlNode* c : row->Children("c")) {
        CellAddress addr{r, next_col};
        if (c->HasAttr("r")) addr = FromA1(c->Attr("r"));
        next_col = addr.col + 1;
        RawCell cell{addr, "", std::stoul(c->Attr("s", "0"))};
        std::string type = c->Attr("t", "n");
        const XmlNode* v = c->Child("v");
        std::string value = v ? v->text : "";
        if (type == "s") {
          if (!value.empty()) {
            std::size_t idx = std::stoul(value);
            if (idx >= shared.size()) {
              throw IngestError("shared string index out of range in " + part);
            }
            cell.text = shared[idx];
          }
        } else if (type == "inlineStr") {
          cell.text = InlineText(c->Child("is"));
        } else if (type == "b") {
          cell.text = value.empty() ? "" : (value == "1" ? "TRUE" : "FALSE");
        } else if (type == "n" && !value.empty()) {
          cell.text = value;
          try {
            double number = std::stod(value);
            std::string code = cell.style < styles.xf_number_codes.size()
                                   ? styles.xf_number_codes[cell.style]
                                   : "General";
            auto shown = internal::FormatNumber(number, code);
            cell.text = shown ? *shown : value;
          } catch (const std::exception&) {
            cell.text = value;
          }
        } else {
          cell.text = value;  // str, e, d: stored text is the display text
        }
        max_row = std::max(max_row, addr.row);
        max_col = std::max(max_col, addr.col);
        raw.push_back(std::move(cell));
      }
    }
  }
  if (static_cast<std::size_t>(max_row) * max_col > kMaxDenseCells) {
    throw IngestError("sheet " + name + " is too large (" +
                      std::to_string(max_row) + "x" + std::to_string(max_col) +
                      ")");
  }
  NamedSheet out{name, Sheet(max_row, max_col, default_width), {}};
  for (const auto& [c, w] : widths) {
    if (c <= max_col) out.sheet.set_col_width(c, w);
  }
  for (RawCell& cell : raw) {
    CellData& dst = out.sheet.at(cell.addr);
    dst.text = std::move(cell.text);
    if (cell.style < styles.xf_formats.size()) {
      dst.format = styles.xf_formats[cell.style];
    } else if (cell.style != 0) {
      warnings.push_back(name + "!" + ToA1(cell.addr) + ": unknown style " +
                         std::to_string(cell.style));
    }
  }
  out.sheet.TrimToUsedRange();

  // Excel table parts double as table annotations.
  if (const XmlNode* parts = root->Child("tableParts")) {
    auto rels = ReadRels(zip, part);
    for (const XmlNode* tp : parts->Children("tablePart")) {
      auto it = rels.find(tp->Attr("id"));
      if (it == rels.end()) continue;
      auto tdoc = zip.Read(it->second.target);
      if (!tdoc) continue;
      auto troot = internal::ParseXml(*tdoc, it->second.target);
      out.tables.push_back(RangeFromA1(troot->Attr("ref")));
    }
  }
  return out;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

// ---------------------------------------------------------------------------
// JSON schema helpers

const json& Require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(path + "." + key, "missing required field");
  }
  return *it;
}

int RequireInt(const json& v, const std::string& path, int min_value) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  auto n = v.get<long long>();
  if (n < min_value || n > (1 << 24)) {
    throw SchemaError(path, "value " + std::to_string(n) + " out of range");
  }
  return static_cast<int>(n);
}

bool OptBool(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) throw SchemaError(path + "." + key, "expected a bool");
  return it->get<bool>();
}

}  // namespace

const NamedSheet* Workbook::FindSheet(std::string_view sheet_name) const {
  for (const NamedSheet& s : sheets) {
    if (s.name == sheet_name) return &s;
  }
  return nullptr;
}

void CheckUniqueSheetNames(const Workbook& wb) {
  std::set<std::string> seen;
  for (const NamedSheet& s : wb.sheets) {
    if (!seen.insert(s.name).second) {
      throw ConfigError("duplicate sheet name \"" + s.name + "\" in workbook " +
                        wb.name);
    }
  }
}

Workbook LoadXlsx(const std::filesystem::path& path) {
  internal::ZipArchive zip(ReadFileBytes(path));
  Workbook wb;
  wb.name = path.stem().string();

  std::string workbook_part = "xl/workbook.xml";
  for (const auto& [id, rel] : ReadRels(zip, "")) {
    if (EndsWith(rel.type, "/officeDocument")) workbook_part = rel.target;
  }
  auto wb_doc = zip.Read(workbook_part);
  if (!wb_doc) throw IngestError(path.string() + ": no workbook part");
  auto wb_root = internal::ParseXml(*wb_doc, workbook_part);
  auto rels = ReadRels(zip, workbook_part);

  std::string shared_part, styles_part, theme_part;
  for (const auto& [id, rel] : rels) {
    if (EndsWith(rel.type, "/sharedStrings")) shared_part = rel.target;
    if (EndsWith(rel.type, "/styles")) styles_part = rel.target;
    if (EndsWith(rel.type, "/theme")) theme_part = rel.target;
  }
  ColorResolver colors(ReadTheme(zip, theme_part), &wb.warnings);
  StyleTable styles = ReadStyles(zip, styles_part, colors);
  std::vector<std::string> shared = ReadSharedStrings(zip, shared_part);

  const XmlNode* sheets = wb_root->Child("sheets");
  if (sheets) {
    for (const XmlNode* s : sheets->Children("sheet")) {
      std::string name = s->Attr("name");
      auto it = rels.find(s->Attr("id"));
      if (it == rels.end()) {
        wb.warnings.push_back(name + ": no relationship, skipped");
        continue;
      }
      if (!EndsWith(it->second.type, "/worksheet")) {
        wb.warnings.push_back(name + ": unsupported sheet type " +
                              it->second.type + ", skipped");
        continue;
      }
      wb.sheets.push_back(ReadWorksheet(zip, it->second.target, name, shared,
                                        styles, wb.warnings));
    }
  }

  auto sidecar = path;
  sidecar += ".tables.json";
  if (std::filesystem::exists(sidecar)) {
    std::ifstream in(sidecar);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw SchemaError("$", sidecar.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw SchemaError("$", "expected an object");
    for (auto& [sheet_name, ranges] : doc.items()) {
      auto target = std::find_if(
          wb.sheets.begin(), wb.sheets.end(),
          [&](const NamedSheet& ns) { return ns.name == sheet_name; });
      if (target == wb.sheets.end()) {
        wb.warnings.push_back("annotation for unknown sheet " + sheet_name);
        continue;
      }
      if (!ranges.is_array()) {
        throw SchemaError("$." + sheet_name, "expected an array of ranges");
      }
      target->tables.clear();
      for (const json& r : ranges) {
        target->tables.push_back(RangeFromA1(r.get<std::string>()));
      }
    }
  }
  CheckUniqueSheetNames(wb);
  return wb;
}

json SheetToJson(const NamedSheet& ns) {
  const Sheet& s = ns.sheet;
  json cells = json::array();
  for (int r = 1; r <= s.rows(); ++r) {
    for (int c = 1; c <= s.cols(); ++c) {
      const CellData& cell = s.at(r, c);
      if (cell.text.empty() && cell.format.IsDefault()) continue;
      json entry = {{"r", r}, {"c", c}, {"t", cell.text}};
      if (!cell.format.IsDefault()) {
        const CellFormat& f = cell.format;
        entry["f"] = {{"bt", f.border_top},   {"bb", f.border_bottom},
                      {"bl", f.border_left},  {"br", f.border_right},
                      {"bold", f.bold},
                      {"fill", f.fill ? json(ToHex(*f.fill)) : json(nullptr)}};
      }
      cells.push_back(std::move(entry));
    }
  }
  json tables = json::array();
  for (const TableRange& t : ns.tables) tables.push_back(RangeToA1(t));
  json out = {{"name", ns.name},
              {"rows", s.rows()},
              {"cols", s.cols()},
              {"col_widths", s.col_widths()},
              {"cells", std::move(cells)},
              {"tables", std::move(tables)}};
  if (s.row_height() != 1.0) out["row_height"] = s.row_height();
  return out;
}

NamedSheet SheetFromJson(const json& doc, const std::string& path) {
  const json& name = Require(doc, "name", path);
  if (!name.is_string()) throw SchemaError(path + ".name", "expected a string");
  int rows = RequireInt(Require(doc, "rows", path), path + ".rows", 1);
  int cols = RequireInt(Require(doc, "cols", path), path + ".cols", 1);
  if (static_cast<std::size_t>(rows) * cols > kMaxDenseCells) {
    throw SchemaError(path, "sheet too large");
  }
  NamedSheet ns{name.get<std::string>(), Sheet(rows, cols), {}};

  const json& widths = Require(doc, "col_widths", path);
  if (!widths.is_array() || widths.size() != static_cast<std::size_t>(cols)) {
    throw SchemaError(path + ".col_widths",
                      "expected an array of " + std::to_string(cols) +
                          " numbers");
  }
  for (int c = 1; c <= cols; ++c) {
    const json& w = widths[c - 1];
    std::string wpath = path + ".col_widths[" + std::to_string(c - 1) + "]";
    if (!w.is_number() || !(w.get<double>() > 0)) {
      throw SchemaError(wpath, "expected a positive number");
    }
    ns.sheet.set_col_width(c, w.get<double>());
  }
  if (auto it = doc.find("row_height"); it != doc.end()) {
    if (!it->is_number() || !(it->get<double>() > 0)) {
      throw SchemaError(path + ".row_height", "expected a positive number");
    }
    ns.sheet.set_row_height(it->get<double>());
  }

  const json& cells = Require(doc, "cells", path);
  if (!cells.is_array()) throw SchemaError(path + ".cells", "expected an array");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string cpath = path + ".cells[" + std::to_string(i) + "]";
    const json& cell = cells[i];
    int r = RequireInt(Require(cell, "r", cpath), cpath + ".r", 1);
    int c = RequireInt(Require(cell, "c", cpath), cpath + ".c", 1);
    if (r > rows || c > cols) {
      throw SchemaError(cpath, "cell (" + std::to_string(r) + "," +
                                   std::to_string(c) + ") outside the sheet");
    }
    CellData& dst = ns.sheet.at(r, c);
    if (auto t = cell.find("t"); t != cell.end()) {
      if (!t->is_string()) throw SchemaError(cpath + ".t", "expected a string");
      dst.text = t->get<std::string>();
    }
    if (auto f = cell.find("f"); f != cell.end() && !f->is_null()) {
      std::string fpath = cpath + ".f";
      if (!f->is_object()) throw SchemaError(fpath, "expected an object");
      dst.format.border_top = OptBool(*f, "bt", fpath);
      dst.format.border_bottom = OptBool(*f, "bb", fpath);
      dst.format.border_left = OptBool(*f, "bl", fpath);
      dst.format.border_right = OptBool(*f, "br", fpath);
      dst.format.bold = OptBool(*f, "bold", fpath);
      if (auto fill = f->find("fill"); fill != f->end() && !fill->is_null()) {
        if (!fill->is_string()) {
          throw SchemaError(fpath + ".fill", "expected \"#RRGGBB\" or null");
        }
        try {
          dst.format.fill = RgbFromHex(fill->get<std::string>());
        } catch (const ParseError& e) {
          throw SchemaError(fpath + ".fill", e.what());
        }
      }
    }
  }

  if (auto tables = doc.find("tables"); tables != doc.end()) {
    if (!tables->is_array()) {
      throw SchemaError(path + ".tables", "expected an array");
    }
    for (std::size_t i = 0; i < tables->size(); ++i) {
      std::string tpath = path + ".tables[" + std::to_string(i) + "]";
      const json& t = (*tables)[i];
      if (!t.is_string()) throw SchemaError(tpath, "expected a range string");
      TableRange range;
      try {
        range = RangeFromA1(t.get<std::string>());
      } catch (const ParseError& e) {
        throw SchemaError(tpath, e.what());
      }
      if (!ns.sheet.Contains(range.bottom_right)) {
        throw SchemaError(tpath, "range outside the sheet");
      }
      ns.tables.push_back(range);
    }
  }
  return ns;
}

json WorkbookToJson(const Workbook& wb) {
  json sheets = json::array();
  for (const NamedSheet& s : wb.sheets) sheets.push_back(SheetToJson(s));
  return {{"name", wb.name}, {"sheets", std::move(sheets)}};
}

Workbook WorkbookFromJson(const json& doc) {
  Workbook wb;
  const json& name = Require(doc, "name", "$");
  if (!name.is_string()) throw SchemaError("$.name", "expected a string");
  wb.name = name.get<std::string>();
  const json& sheets = Require(doc, "sheets", "$");
  if (!sheets.is_array()) throw SchemaError("$.sheets", "expected an array");
  for (std::size_t i = 0; i < sheets.size(); ++i) {
    wb.sheets.push_back(
        SheetFromJson(sheets[i], "$.sheets[" + std::to_string(i) + "]"));
  }
  CheckUniqueSheetNames(wb);
  return wb;
}

Workbook LoadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError("$", path.string() + ": " + e.what());
  }
  return WorkbookFromJson(doc);
}

void SaveJson(const Workbook& wb, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write " + path.string());
  out << WorkbookToJson(wb).dump(1) << "\n";
}

Workbook LoadWorkbook(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  if (ext == ".xlsx" || ext == ".xlsm") return LoadXlsx(path);
  if (ext == ".json") return LoadJson(path);
  throw IngestError("unsupported input type " + path.string());
}

}  // namespace sheetvis
