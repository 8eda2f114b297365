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

#include "sheetvis/parsing.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>

#include <nlohmann/json.hpp>

#include "sheetvis/errors.hpp"

namespace sheetvis {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 8> kFenceTags = {
    "text", "plaintext", "json", "csv", "txt", "markdown", "md", "plain"};

constexpr std::array<std::string_view, 3> kBullets = {"- ", "* ", "• "};

bool StartsWith(std::string_view s, std::string_view p) {
  return s.substr(0, p.size()) == p;
}

bool EndsWith(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> SplitLines(std::string_view raw) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t nl = raw.find('\n', start);
    std::string_view line = raw.substr(
        start, nl == std::string_view::npos ? std::string_view::npos
                                            : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

bool IsAsciiAlnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}
bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }

struct AddressToken {
  CellAddress first;
  std::optional<CellAddress> second;
};

// Scans one A1 address at s[i] (optionally with '$' anchors). On success
// advances i past it.
std::optional<CellAddress> ScanA1(std::string_view s, std::size_t& i) {
  std::size_t j = i;
  if (j > 0 && (IsAsciiAlnum(s[j - 1]) || s[j - 1] == '_')) return std::nullopt;
  if (j < s.size() && s[j] == '$') ++j;
  std::size_t letters = j;
  while (j < s.size() && IsUpper(s[j])) ++j;
  if (j == letters || j - letters > 4) return std::nullopt;
  std::string col(s.substr(letters, j - letters));
  if (j < s.size() && s[j] == '$') ++j;
  std::size_t digits = j;
  while (j < s.size() && IsDigit(s[j])) ++j;
  if (j == digits) return std::nullopt;
  if (j < s.size() && (IsAsciiAlnum(s[j]) || s[j] == '_')) return std::nullopt;
  CellAddress a = FromA1(col + std::string(s.substr(digits, j - digits)));
  i = j;
  return a;
}

std::optional<CellAddress> ScanRc(std::string_view s, std::size_t& i) {
  std::size_t j = i;
  if (j > 0 && (IsAsciiAlnum(s[j - 1]) || s[j - 1] == '.')) return std::nullopt;
  std::size_t r0 = j;
  while (j < s.size() && IsDigit(s[j])) ++j;
  if (j == r0) return std::nullopt;
  std::size_t r1 = j;
  while (j < s.size() && s[j] == ' ') ++j;
  if (j >= s.size() || s[j] != ',') return std::nullopt;
  ++j;
  while (j < s.size() && s[j] == ' ') ++j;
  std::size_t c0 = j;
  while (j < s.size() && IsDigit(s[j])) ++j;
  if (j == c0) return std::nullopt;
  if (j < s.size() && (IsAsciiAlnum(s[j]) || s[j] == '.')) return std::nullopt;
  CellAddress a = FromRc(std::string(s.substr(r0, r1 - r0)) + "," +
                         std::string(s.substr(c0, j - c0)));
  i = j;
  return a;
}

std::optional<CellAddress> ScanAddress(std::string_view s, std::size_t& i,
                                       AddressForm form) {
  return form == AddressForm::kA1 ? ScanA1(s, i) : ScanRc(s, i);
}

// Finds all address and region tokens in a line. Malformed indices are
// reported through `errors`.
std::vector<AddressToken> ScanTokens(std::string_view s, AddressForm form,
                                     std::vector<std::string>& errors) {
  std::vector<AddressToken> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t start = i;
    std::optional<CellAddress> a;
    try {
      a = ScanAddress(s, i, form);
    } catch (const ParseError& e) {
      errors.push_back(e.what());
      i = start + 1;
      while (i < s.size() && (IsAsciiAlnum(s[i]) || s[i] == ',')) ++i;
      continue;
    }
    if (!a) {
      ++i;
      continue;
    }
    AddressToken tok{*a, std::nullopt};
    std::size_t j = i;
    while (j < s.size() && s[j] == ' ') ++j;
    if (j < s.size() && s[j] == ':') {
      ++j;
      while (j < s.size() && s[j] == ' ') ++j;
      std::size_t k = j;
      try {
        if (auto b = ScanAddress(s, k, form)) {
          tok.second = *b;
          i = k;
        }
      } catch (const ParseError& e) {
        errors.push_back(e.what());
        i = k;
      }
    }
    out.push_back(tok);
  }
  return out;
}

std::string StripAddressDecoration(std::string_view s) {
  std::string t = Trim(s);
  while (!t.empty() && (t.back() == '.' || t.back() == ';')) t.pop_back();
  if (t.size() >= 2) {
    char a = t.front(), b = t.back();
    if ((a == '(' && b == ')') || (a == '[' && b == ']') ||
        (a == '"' && b == '"') || (a == '\'' && b == '\'') ||
        (a == '`' && b == '`')) {
      t = Trim(std::string_view(t).substr(1, t.size() - 2));
    }
  }
  if (!t.empty() && t.front() == '$') {
    t.erase(std::remove(t.begin(), t.end(), '$'), t.end());
  }
  return t;
}

std::optional<CellAddress> TryAddress(std::string_view s, AddressForm form) {
  std::string t = StripAddressDecoration(s);
  if (t.empty()) return std::nullopt;
  try {
    return ParseAddress(t, form);
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

std::optional<SpatialPair> SplitPair(std::string_view line, AddressForm form) {
  auto attempt = [&](std::size_t pos,
                     std::size_t sep_len) -> std::optional<SpatialPair> {
    if (pos == std::string_view::npos) return std::nullopt;
    std::string value = Trim(line.substr(0, pos));
    if (value.empty()) return std::nullopt;
    auto addr = TryAddress(line.substr(pos + sep_len), form);
    if (!addr) return std::nullopt;
    return SpatialPair{std::move(value), *addr};
  };
  if (auto p = attempt(line.rfind("=>"), 2)) return p;
  if (auto p = attempt(line.rfind('\t'), 1)) return p;
  if (auto p = attempt(line.rfind(": "), 2)) return p;
  std::size_t ws = line.find_last_of(' ');
  return attempt(ws, 1);
}

std::string ElementText(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::vector<std::string> EdgeList(const json& obj,
                                  std::initializer_list<std::string_view> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    std::string k = Lower(it.key());
    for (std::string_view want : keys) {
      if (k != want) continue;
      std::vector<std::string> out;
      const json& v = it.value();
      if (v.is_array()) {
        for (const json& e : v) {
          if (!e.is_null()) out.push_back(ElementText(e));
        }
      } else if (!v.is_null()) {
        out.push_back(ElementText(v));
      }
      return out;
    }
  }
  return {};
}

BorderPrediction TableFromJson(const json& obj) {
  if (!obj.is_object()) {
    throw TableParseError("table entry is not a JSON object: " +
                          obj.dump().substr(0, 80));
  }
  BorderPrediction t;
  t.top = EdgeList(obj, {"top", "b_t", "bt"});
  t.bottom = EdgeList(obj, {"bottom", "b_b", "bb"});
  t.left = EdgeList(obj, {"left", "b_l", "bl"});
  t.right = EdgeList(obj, {"right", "b_r", "br"});
  return t;
}

std::string Dump(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

std::string_view GrammarName(Grammar g) {
  switch (g) {
    case Grammar::kOcrLines: return "ocr_lines";
    case Grammar::kPairLines: return "pair_lines";
    case Grammar::kAddressLines: return "address_lines";
    case Grammar::kFourBoundariesJson: return "four_boundaries_json";
    case Grammar::kRangeLines: return "range_lines";
  }
  return "ocr_lines";
}

Grammar GrammarFromName(std::string_view name) {
  for (Grammar g : {Grammar::kOcrLines, Grammar::kPairLines,
                    Grammar::kAddressLines, Grammar::kFourBoundariesJson,
                    Grammar::kRangeLines}) {
    if (GrammarName(g) == name) return g;
  }
  throw ConfigError("unknown grammar \"" + std::string(name) + "\"");
}

std::vector<std::string> CleanLines(std::string_view raw) {
  std::vector<std::string> lines = SplitLines(raw);

  std::size_t open = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (StartsWith(Trim(lines[i]), "```")) {
      open = i;
      break;
    }
  }
  if (open < lines.size()) {
    std::string rest = Trim(Trim(lines[open]).substr(3));
    std::size_t first = open;
    bool tag = rest.empty() ||
               std::find(kFenceTags.begin(), kFenceTags.end(), Lower(rest)) !=
                   kFenceTags.end();
    if (tag) {
      first = open + 1;
    } else {
      lines[open] = rest;
    }
    std::size_t last = lines.size();
    for (std::size_t i = first; i < lines.size(); ++i) {
      std::string t = Trim(lines[i]);
      if (EndsWith(t, "```")) {
        lines[i] = Trim(std::string_view(t).substr(0, t.size() - 3));
        last = i + 1;
        break;
      }
    }
    lines = std::vector<std::string>(lines.begin() + first,
                                     lines.begin() + last);
  }

  for (std::string& l : lines) l = Trim(l);

  bool any = false;
  bool all_bulleted = true;
  for (const std::string& l : lines) {
    if (l.empty()) continue;
    any = true;
    bool bullet = std::any_of(kBullets.begin(), kBullets.end(),
                              [&](std::string_view b) { return StartsWith(l, b); });
    if (!bullet) {
      all_bulleted = false;
      break;
    }
  }
  if (any && all_bulleted) {
    for (std::string& l : lines) {
      for (std::string_view b : kBullets) {
        if (StartsWith(l, b)) {
          l = Trim(std::string_view(l).substr(b.size()));
          break;
        }
      }
    }
  }
  return lines;
}

std::vector<std::string> ParseOcr(std::string_view raw) {
  std::vector<std::string> out;
  for (std::string& l : CleanLines(raw)) {
    if (!l.empty()) out.push_back(std::move(l));
  }
  return out;
}

std::vector<SpatialPair> ParseSpatial(std::string_view raw, AddressForm form,
                                      std::vector<Reject>* rejects) {
  std::vector<SpatialPair> out;
  std::set<std::string> seen;
  std::vector<std::string> lines = CleanLines(raw);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (l.empty()) continue;
    std::optional<SpatialPair> p = SplitPair(l, form);
    if (!p) {
      if (rejects) {
        rejects->push_back({static_cast<int>(i + 1), l,
                            "no value/address pair"});
      }
      continue;
    }
    if (!seen.insert(p->value).second) continue;
    out.push_back(std::move(*p));
  }
  return out;
}

AddressSet ParseFormat(std::string_view raw, AddressForm form,
                       std::vector<Reject>* rejects, std::size_t* capped) {
  AddressSet out;
  std::vector<std::string> lines = CleanLines(raw);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (l.empty()) continue;
    std::vector<std::string> errors;
    std::vector<AddressToken> tokens = ScanTokens(l, form, errors);
    int line_no = static_cast<int>(i + 1);
    if (rejects) {
      for (const std::string& e : errors) rejects->push_back({line_no, l, e});
      if (tokens.empty() && errors.empty()) {
        rejects->push_back({line_no, l, "no address"});
      }
    }
    for (const AddressToken& t : tokens) {
      if (!t.second) {
        out.insert(t.first);
        continue;
      }
      TableRange r = TableRange{t.first, *t.second}.Normalized();
      std::size_t cells = static_cast<std::size_t>(r.rows()) *
                          static_cast<std::size_t>(r.cols());
      if (cells > kMaxRegionCells) {
        if (capped) ++*capped;
        if (rejects) {
          rejects->push_back({line_no, l,
                              "region " + RangeToA1(r) + " exceeds " +
                                  std::to_string(kMaxRegionCells) + " cells"});
        }
        continue;
      }
      for (int row = r.top_left.row; row <= r.bottom_right.row; ++row) {
        for (int col = r.top_left.col; col <= r.bottom_right.col; ++col) {
          out.insert({row, col});
        }
      }
    }
  }
  return out;
}

std::vector<BorderPrediction> ParseFourBoundaries(std::string_view raw) {
  std::string text;
  for (const std::string& l : CleanLines(raw)) {
    text += l;
    text += '\n';
  }
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    std::size_t a = text.find_first_of("[{");
    std::size_t b = text.find_last_of("]}");
    if (a != std::string::npos && b != std::string::npos && b > a) {
      doc = json::parse(text.substr(a, b - a + 1), nullptr, false);
    }
  }
  if (doc.is_discarded()) {
    throw TableParseError("answer is not valid JSON");
  }
  std::vector<BorderPrediction> out;
  if (doc.is_object()) {
    auto it = doc.find("tables");
    if (it != doc.end() && it->is_array()) {
      doc = *it;
    } else {
      out.push_back(TableFromJson(doc));
      return out;
    }
  }
  if (!doc.is_array()) throw TableParseError("expected a JSON array of tables");
  for (const json& e : doc) out.push_back(TableFromJson(e));
  return out;
}

std::vector<TableRange> ParseRanges(std::string_view raw,
                                    std::vector<Reject>* rejects) {
  std::vector<TableRange> out;
  std::vector<std::string> lines = CleanLines(raw);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (l.empty()) continue;
    std::vector<std::string> errors;
    std::vector<AddressToken> tokens = ScanTokens(l, AddressForm::kA1, errors);
    int line_no = static_cast<int>(i + 1);
    bool found = false;
    for (const AddressToken& t : tokens) {
      if (!t.second) continue;
      out.push_back(TableRange{t.first, *t.second}.Normalized());
      found = true;
    }
    if (!found && rejects) {
      rejects->push_back({line_no, l,
                          errors.empty() ? "no range" : errors.front()});
    }
  }
  return out;
}

ParsedPrediction Parse(std::string_view raw, Grammar grammar,
                       AddressForm form) {
  ParsedPrediction p;
  p.grammar = grammar;
  switch (grammar) {
    case Grammar::kOcrLines:
      p.ocr = ParseOcr(raw);
      break;
    case Grammar::kPairLines:
      p.pairs = ParseSpatial(raw, form, &p.rejects);
      break;
    case Grammar::kAddressLines:
      p.addresses = ParseFormat(raw, form, &p.rejects, &p.capped_regions);
      break;
    case Grammar::kFourBoundariesJson:
      p.tables = ParseFourBoundaries(raw);
      break;
    case Grammar::kRangeLines:
      p.ranges = ParseRanges(raw, &p.rejects);
      break;
  }
  return p;
}

std::string SerializeOcr(const std::vector<std::string>& cells) {
  std::string out;
  for (const std::string& c : cells) {
    out += c;
    out += '\n';
  }
  return out;
}

std::string SerializePairs(const std::vector<SpatialPair>& pairs,
                           AddressForm form) {
  std::string out;
  for (const SpatialPair& p : pairs) {
    out += p.value;
    out += " => ";
    out += FormatAddress(p.addr, form);
    out += '\n';
  }
  return out;
}

std::string SerializeAddresses(const AddressSet& cells, AddressForm form) {
  std::string out;
  for (const CellAddress& a : cells) {
    out += FormatAddress(a, form);
    out += '\n';
  }
  return out;
}

std::string SerializeFourBoundaries(const std::vector<BorderPrediction>& t) {
  json arr = json::array();
  for (const BorderPrediction& b : t) {
    json o = json::object();
    o["top"] = b.top;
    o["bottom"] = b.bottom;
    o["left"] = b.left;
    o["right"] = b.right;
    arr.push_back(std::move(o));
  }
  return Dump(arr) + "\n";
}

std::string SerializeRanges(const std::vector<TableRange>& ranges) {
  std::string out;
  for (const TableRange& r : ranges) {
    out += RangeToA1(r);
    out += '\n';
  }
  return out;
}

std::string Serialize(const ParsedPrediction& p, AddressForm form) {
  switch (p.grammar) {
    case Grammar::kOcrLines: return SerializeOcr(p.ocr);
    case Grammar::kPairLines: return SerializePairs(p.pairs, form);
    case Grammar::kAddressLines: return SerializeAddresses(p.addresses, form);
    case Grammar::kFourBoundariesJson: return SerializeFourBoundaries(p.tables);
    case Grammar::kRangeLines: return SerializeRanges(p.ranges);
  }
  return {};
}

}  // namespace sheetvis
