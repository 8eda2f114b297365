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

// Seeded generator of multi-table workbooks with annotated table ranges.
//
// Tables never touch: every pair is separated by at least one blank row or
// column, and scattered note cells keep the same distance. Each table has a
// header row; its four edges are fully populated so every boundary has
// content.

#ifndef SHEETVIS_SYNTH_HPP_
#define SHEETVIS_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sheetvis/ingest.hpp"

namespace sheetvis {

enum class BorderStyle { kFull, kOutline, kNone };

std::string_view BorderStyleName(BorderStyle b);  // "full", "outline", "none"
BorderStyle BorderStyleFromName(std::string_view name);

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct SynthSpec {
  std::uint64_t seed = 0;
  std::string name = "synth";
  int sheet_count = 1;

  IntRange sheet_rows = {24, 40};
  IntRange sheet_cols = {10, 16};
  IntRange table_count = {1, 3};
  IntRange table_rows = {4, 10};  // including the header row
  IntRange table_cols = {3, 6};

  double header_bold_prob = 0.8;
  double fill_prob = 0.4;  // chance a table's header row is filled
  BorderStyle border_style = BorderStyle::kOutline;
  std::vector<std::string> words;  // empty: built-in vocabulary
  IntRange number_range = {0, 99999};
  double overflow_pressure = 0.3;  // chance of one long text per table
  double blank_row_prob = 0.1;     // per interior body row; edges stay
  IntRange note_count = {0, 2};

  // Every non-empty cell text is unique within the workbook.
  bool distinct_values = true;

  // Throws ConfigError.
  void Validate() const;
  nlohmann::json ToJson() const;
};

const std::vector<std::string>& DefaultVocabulary();

// Throws GenerationError when the tables cannot be packed into the sheet.
Workbook Generate(const SynthSpec& spec);

// `count` workbooks named "<prefix>_NN" from consecutive derived seeds.
std::vector<Workbook> GenerateCorpus(const SynthSpec& base, int count,
                                     const std::string& prefix);

// The five-workbook corpus used by the demo command.
std::vector<Workbook> DemoCorpus(std::uint64_t seed = 2024);

}  // namespace sheetvis

#endif  // SHEETVIS_SYNTH_HPP_
