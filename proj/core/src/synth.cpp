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

#include "sheetvis/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "sheetvis/errors.hpp"
#include "sheetvis/random.hpp"
#include "sheetvis/transform.hpp"

namespace sheetvis {
namespace {

constexpr int kPlacementAttempts = 400;
constexpr int kMaxSheetRows = 500;
constexpr int kMaxSheetCols = 60;
constexpr int kLongTextMin = 20;

constexpr std::string_view kFills[] = {"#FFF2CC", "#DDEBF7", "#E2EFDA",
                                       "#FCE4D6", "#EDEDED"};

void CheckProb(double p, const char* name) {
  if (!(p >= 0 && p <= 1)) {
    throw ConfigError(std::string(name) + " must be in [0, 1]");
  }
}

void CheckRange(IntRange r, int min_lo, int max_hi, const char* name) {
  if (r.lo < min_lo || r.hi < r.lo || r.hi > max_hi) {
    throw ConfigError(std::string(name) + " must satisfy " +
                      std::to_string(min_lo) + " <= lo <= hi <= " +
                      std::to_string(max_hi));
  }
}

bool Overlaps(const TableRange& a, const TableRange& b, int margin) {
  return a.top_left.row - margin <= b.bottom_right.row &&
         b.top_left.row <= a.bottom_right.row + margin &&
         a.top_left.col - margin <= b.bottom_right.col &&
         b.top_left.col <= a.bottom_right.col + margin;
}

class SheetBuilder {
 public:
  SheetBuilder(const SynthSpec& spec, Rng& rng, std::set<std::string>& used)
      : spec_(spec),
        rng_(rng),
        used_(used),
        words_(spec.words.empty() ? DefaultVocabulary() : spec.words) {}

  NamedSheet Build(const std::string& name) {
    const int rows = Draw(spec_.sheet_rows);
    const int cols = Draw(spec_.sheet_cols);
    NamedSheet out{name, Sheet(rows, cols), {}};
    const int count = Draw(spec_.table_count);
    for (int i = 0; i < count; ++i) {
      out.tables.push_back(Place(out.tables, rows, cols, i));
    }
    std::sort(out.tables.begin(), out.tables.end(),
              [](const TableRange& a, const TableRange& b) {
                return a.top_left < b.top_left;
              });
    for (const TableRange& t : out.tables) FillTable(out.sheet, t);
    AddNotes(out.sheet, out.tables);
    return out;
  }

 private:
  int Draw(IntRange r) { return rng_.Between(r.lo, r.hi); }

  TableRange Place(const std::vector<TableRange>& placed, int rows, int cols,
                   int index) {
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      int h = std::min(Draw(spec_.table_rows), rows);
      int w = std::min(Draw(spec_.table_cols), cols);
      int r0 = rng_.Between(1, rows - h + 1);
      int c0 = rng_.Between(1, cols - w + 1);
      TableRange cand{{r0, c0}, {r0 + h - 1, c0 + w - 1}};
      bool ok = std::none_of(placed.begin(), placed.end(),
                             [&](const TableRange& p) {
                               return Overlaps(cand, p, 1);
                             });
      if (ok) return cand;
    }
    throw GenerationError("cannot place table " + std::to_string(index + 1) +
                          " in a " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " sheet without overlap");
  }

  std::string Unique(std::string candidate) {
    if (!spec_.distinct_values) return candidate;
    if (used_.insert(candidate).second) return candidate;
    for (int n = 2;; ++n) {
      std::string alt = candidate + " " + std::to_string(n);
      if (used_.insert(alt).second) return alt;
    }
  }

  const std::string& Word() { return words_[rng_.Below(words_.size())]; }

  std::string Phrase(int min_words, int max_words) {
    int n = rng_.Between(min_words, max_words);
    std::string s = Word();
    for (int i = 1; i < n; ++i) s += " " + Word();
    return s;
  }

  std::string Number() {
    int v = Draw(spec_.number_range);
    if (rng_.Chance(0.3)) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%d.%02d", v,
                    static_cast<int>(rng_.Below(100)));
      return buf;
    }
    return std::to_string(v);
  }

  std::string LongText() {
    std::string s = Phrase(3, 4);
    while (DisplayLength(s) < kLongTextMin) s += " " + Word();
    return s;
  }

  void FillTable(Sheet& s, const TableRange& t) {
    const auto [r0, c0] = t.top_left;
    const auto [r1, c1] = t.bottom_right;
    const bool bold = rng_.Chance(spec_.header_bold_prob);
    std::optional<Rgb> fill;
    if (rng_.Chance(spec_.fill_prob)) {
      fill = RgbFromHex(kFills[rng_.Below(std::size(kFills))]);
    }
    for (int c = c0; c <= c1; ++c) {
      CellData& cell = s.at(r0, c);
      cell.text = Unique(Phrase(1, 2));
      cell.format.bold = bold;
      cell.format.fill = fill;
    }
    for (int r = r0 + 1; r <= r1; ++r) {
      bool interior = r < r1;
      bool blank = interior && rng_.Chance(spec_.blank_row_prob);
      for (int c = c0; c <= c1; ++c) {
        if (blank && c != c0 && c != c1) continue;
        s.at(r, c).text = Unique(c == c0 ? Phrase(1, 2) : Number());
      }
    }
    if (rng_.Chance(spec_.overflow_pressure) && r1 > r0) {
      int r = rng_.Between(r0 + 1, r1);
      int c = rng_.Between(c0, c1);
      if (s.at(r, c).IsNull()) r = r1;
      used_.erase(s.at(r, c).text);
      s.at(r, c).text = Unique(LongText());
    }
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        CellFormat& f = s.at(r, c).format;
        switch (spec_.border_style) {
          case BorderStyle::kFull:
            f.border_top = f.border_bottom = f.border_left = f.border_right =
                true;
            break;
          case BorderStyle::kOutline:
            f.border_top = r == r0;
            f.border_bottom = r == r1;
            f.border_left = c == c0;
            f.border_right = c == c1;
            break;
          case BorderStyle::kNone:
            break;
        }
      }
    }
  }

  void AddNotes(Sheet& s, const std::vector<TableRange>& tables) {
    const int count = Draw(spec_.note_count);
    for (int i = 0; i < count; ++i) {
      for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        CellAddress a{rng_.Between(1, s.rows()), rng_.Between(1, s.cols())};
        TableRange cell{a, a};
        bool clear = std::none_of(tables.begin(), tables.end(),
                                  [&](const TableRange& t) {
                                    return Overlaps(cell, t, 1);
                                  });
        if (!clear || !s.at(a).IsNull()) continue;
        s.at(a).text = Unique("Note: " + Phrase(1, 3));
        break;
      }
    }
  }

  const SynthSpec& spec_;
  Rng& rng_;
  std::set<std::string>& used_;
  const std::vector<std::string>& words_;
};

}  // namespace

std::string_view BorderStyleName(BorderStyle b) {
  switch (b) {
    case BorderStyle::kFull: return "full";
    case BorderStyle::kOutline: return "outline";
    case BorderStyle::kNone: return "none";
  }
  return "outline";
}

BorderStyle BorderStyleFromName(std::string_view name) {
  for (BorderStyle b : {BorderStyle::kFull, BorderStyle::kOutline,
                        BorderStyle::kNone}) {
    if (BorderStyleName(b) == name) return b;
  }
  throw ConfigError("unknown border style \"" + std::string(name) + "\"");
}

void SynthSpec::Validate() const {
  if (sheet_count < 1) throw ConfigError("sheet_count must be >= 1");
  CheckRange(sheet_rows, 1, kMaxSheetRows, "sheet_rows");
  CheckRange(sheet_cols, 1, kMaxSheetCols, "sheet_cols");
  CheckRange(table_count, 0, 1000, "table_count");
  CheckRange(table_rows, 2, kMaxSheetRows, "table_rows");
  CheckRange(table_cols, 1, kMaxSheetCols, "table_cols");
  CheckRange(note_count, 0, 1000, "note_count");
  if (number_range.hi < number_range.lo) {
    throw ConfigError("number_range must satisfy lo <= hi");
  }
  CheckProb(header_bold_prob, "header_bold_prob");
  CheckProb(fill_prob, "fill_prob");
  CheckProb(overflow_pressure, "overflow_pressure");
  CheckProb(blank_row_prob, "blank_row_prob");
  for (const std::string& w : words) {
    if (IsNullText(w)) throw ConfigError("vocabulary words must be non-empty");
  }
}

nlohmann::json SynthSpec::ToJson() const {
  auto range = [](IntRange r) { return nlohmann::json::array({r.lo, r.hi}); };
  return {{"seed", seed},
          {"name", name},
          {"sheet_count", sheet_count},
          {"sheet_rows", range(sheet_rows)},
          {"sheet_cols", range(sheet_cols)},
          {"table_count", range(table_count)},
          {"table_rows", range(table_rows)},
          {"table_cols", range(table_cols)},
          {"header_bold_prob", header_bold_prob},
          {"fill_prob", fill_prob},
          {"border_style", BorderStyleName(border_style)},
          {"words", words},
          {"number_range", range(number_range)},
          {"overflow_pressure", overflow_pressure},
          {"blank_row_prob", blank_row_prob},
          {"note_count", range(note_count)},
          {"distinct_values", distinct_values}};
}

const std::vector<std::string>& DefaultVocabulary() {
  static const std::vector<std::string> kWords = {
      "Revenue",   "Cost",      "Region",    "Quarter",   "Total",
      "Budget",    "Forecast",  "Actual",    "Variance",  "Sales",
      "Units",     "Price",     "Margin",    "Profit",    "Expense",
      "Payroll",   "Rent",      "Travel",    "Supplies",  "Marketing",
      "North",     "South",     "East",      "West",      "Central",
      "January",   "February",  "March",     "April",     "May",
      "June",      "July",      "August",    "September", "October",
      "November",  "December",  "Product",   "Service",   "Customer",
      "Vendor",    "Invoice",   "Order",     "Shipment",  "Inventory",
      "Account",   "Balance",   "Credit",    "Debit",     "Tax",
      "Discount",  "Growth",    "Target",    "Score",     "Rating",
      "Project",   "Phase",     "Task",      "Owner",     "Status",
      "Open",      "Closed",    "Pending",   "Approved",  "Rejected",
      "Team",      "Manager",   "Analyst",   "Engineer",  "Director",
      "Apples",    "Oranges",   "Pears",     "Grapes",    "Lemons",
      "Coffee",    "Tea",       "Juice",     "Water",     "Milk",
      "Alpha",     "Beta",      "Gamma",     "Delta",     "Omega",
      "Other",     "People",    "Average",   "Median",    "Count",
      "Weekly",    "Monthly",   "Annual",    "Daily",     "Hourly",
      "Retail",    "Online",    "Wholesale", "Export",    "Import",
  };
  return kWords;
}

Workbook Generate(const SynthSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  std::set<std::string> used;
  Workbook wb;
  wb.name = spec.name;
  for (int i = 0; i < spec.sheet_count; ++i) {
    SheetBuilder builder(spec, rng, used);
    wb.sheets.push_back(builder.Build("Sheet" + std::to_string(i + 1)));
  }
  return wb;
}

std::vector<Workbook> GenerateCorpus(const SynthSpec& base, int count,
                                     const std::string& prefix) {
  std::vector<Workbook> out;
  for (int i = 0; i < count; ++i) {
    SynthSpec spec = base;
    spec.seed = MixSeed(base.seed, static_cast<std::uint64_t>(i));
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "_%02d", i + 1);
    spec.name = prefix + suffix;
    out.push_back(Generate(spec));
  }
  return out;
}

std::vector<Workbook> DemoCorpus(std::uint64_t seed) {
  static constexpr BorderStyle kStyles[] = {
      BorderStyle::kOutline, BorderStyle::kFull, BorderStyle::kOutline,
      BorderStyle::kNone, BorderStyle::kFull};
  std::vector<Workbook> out;
  for (int i = 0; i < 5; ++i) {
    SynthSpec spec;
    spec.seed = MixSeed(seed, static_cast<std::uint64_t>(i));
    spec.border_style = kStyles[i];
    char name[16];
    std::snprintf(name, sizeof(name), "demo_%02d", i + 1);
    spec.name = name;
    out.push_back(Generate(spec));
  }
  return out;
}

}  // namespace sheetvis
