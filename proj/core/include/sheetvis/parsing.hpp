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

// Lenient, deterministic parsing of model answers, and the matching
// serializers used by the oracle. Serialize then Parse is the identity on
// every value the truth extractors can produce.
//
// Leniency shared by every grammar:
//   * a surrounding ``` fence is removed; the opening line's remainder is
//     kept as content unless it is a known language tag;
//   * "- ", "* " and "• " bullets are removed only when every non-blank line
//     carries one;
//   * lines are trimmed and blank lines ignored.

#ifndef SHEETVIS_PARSING_HPP_
#define SHEETVIS_PARSING_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sheetvis/sheet.hpp"
#include "sheetvis/truth.hpp"

namespace sheetvis {

enum class Grammar {
  kOcrLines,
  kPairLines,
  kAddressLines,
  kFourBoundariesJson,
  kRangeLines,
};

// "ocr_lines", "pair_lines", "address_lines", "four_boundaries_json",
// "range_lines".
std::string_view GrammarName(Grammar g);
Grammar GrammarFromName(std::string_view name);

struct Reject {
  int line = 0;  // 1-based, after fence removal
  std::string text;
  std::string reason;
  friend bool operator==(const Reject&, const Reject&) = default;
};

struct SpatialPair {
  std::string value;
  CellAddress addr;
  friend bool operator==(const SpatialPair&, const SpatialPair&) = default;
};

// Decoded edges of one predicted table.
struct BorderPrediction {
  std::vector<std::string> top;
  std::vector<std::string> bottom;
  std::vector<std::string> left;
  std::vector<std::string> right;
  friend bool operator==(const BorderPrediction&,
                         const BorderPrediction&) = default;
};

inline BorderPrediction ToPrediction(const BorderContents& b) {
  return {b.top, b.bottom, b.left, b.right};
}

// Typed result of parsing one answer; only the member that belongs to
// `grammar` is populated.
struct ParsedPrediction {
  Grammar grammar = Grammar::kOcrLines;
  std::vector<std::string> ocr;
  std::vector<SpatialPair> pairs;
  AddressSet addresses;
  std::vector<BorderPrediction> tables;
  std::vector<TableRange> ranges;
  std::vector<Reject> rejects;
  std::size_t capped_regions = 0;
};

// Largest number of addresses a single region token may expand to.
inline constexpr std::size_t kMaxRegionCells = 10000;

// Removes a code fence and common bullets, returning the remaining lines
// (trimmed, blank lines kept so line numbers stay meaningful).
std::vector<std::string> CleanLines(std::string_view raw);

std::vector<std::string> ParseOcr(std::string_view raw);

// Accepts "value => addr", "value: addr", "value<TAB>addr" or
// "value addr". Pairs are deduplicated by value, first occurrence wins.
std::vector<SpatialPair> ParseSpatial(std::string_view raw, AddressForm form,
                                      std::vector<Reject>* rejects = nullptr);

// Extracts every address token of `form`; "X:Y" tokens expand to the whole
// region unless it exceeds kMaxRegionCells, in which case the token is
// rejected and counted in `capped`.
AddressSet ParseFormat(std::string_view raw, AddressForm form,
                       std::vector<Reject>* rejects = nullptr,
                       std::size_t* capped = nullptr);

// Throws TableParseError when no valid JSON can be found.
std::vector<BorderPrediction> ParseFourBoundaries(std::string_view raw);

std::vector<TableRange> ParseRanges(std::string_view raw,
                                    std::vector<Reject>* rejects = nullptr);

// Dispatches on `grammar`. Only four_boundaries_json can throw.
ParsedPrediction Parse(std::string_view raw, Grammar grammar,
                       AddressForm form);

std::string SerializeOcr(const std::vector<std::string>& cells);
std::string SerializePairs(const std::vector<SpatialPair>& pairs,
                           AddressForm form);
std::string SerializeAddresses(const AddressSet& cells, AddressForm form);
std::string SerializeFourBoundaries(const std::vector<BorderPrediction>& t);
std::string SerializeRanges(const std::vector<TableRange>& ranges);

// Serializes the member selected by p.grammar.
std::string Serialize(const ParsedPrediction& p, AddressForm form);

}  // namespace sheetvis

#endif  // SHEETVIS_PARSING_HPP_
