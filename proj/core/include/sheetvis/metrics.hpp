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

// Scoring of parsed predictions against ground truth.
//
// Every score is a PRFScore built from three counts. Conventions when a side
// is empty: both empty -> P = R = F1 = 1; otherwise an empty denominator
// gives 0 for that ratio.
//
// Table detection from four decoded borders goes through boundary mapping:
// each border's content list is matched against every sheet row (top and
// bottom) or column (left and right) by sliding the shorter list along the
// longer one; the line with the best fraction of element-wise matches wins,
// provided it reaches 0.8. Later lines win ties.

#ifndef SHEETVIS_METRICS_HPP_
#define SHEETVIS_METRICS_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sheetvis/parsing.hpp"
#include "sheetvis/sheet.hpp"
#include "sheetvis/truth.hpp"

namespace sheetvis {

struct PRFScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t predicted = 0;
  std::size_t truth = 0;
  std::size_t matched = 0;

  static PRFScore FromCounts(std::size_t matched, std::size_t predicted,
                             std::size_t truth);
  friend bool operator==(const PRFScore&, const PRFScore&) = default;
};

// Pools counts (micro-average).
PRFScore Pool(const std::vector<PRFScore>& parts);

// Longest common subsequence length over exactly-equal elements.
std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b);
// Longest common contiguous run (substring semantics).
std::size_t LongestCommonRun(const std::vector<std::string>& a,
                             const std::vector<std::string>& b);

enum class OcrMatch { kStrict, kLcs, kContiguous };

// Positional matches over the shorter length.
PRFScore ScoreOcrStrict(const std::vector<std::string>& pred,
                        const OcrTruth& truth);
PRFScore ScoreOcrLcs(const std::vector<std::string>& pred,
                     const OcrTruth& truth);
PRFScore ScoreOcrContiguous(const std::vector<std::string>& pred,
                            const OcrTruth& truth);
PRFScore ScoreOcr(const std::vector<std::string>& pred, const OcrTruth& truth,
                  OcrMatch mode);

// A prediction counts when its value is queried and its address is right.
// Predictions are deduplicated by value before counting.
PRFScore ScorePairs(const std::vector<SpatialPair>& pred,
                    const SpatialTruth& truth);

PRFScore ScoreAddressSet(const AddressSet& pred, const AddressSet& truth);

struct FormatScores {
  std::array<PRFScore, 6> per_format;
  PRFScore micro;
};

FormatScores ScoreFormats(const std::array<AddressSet, 6>& pred,
                          const FormatTruth& truth);

enum class TieBreak {
  kLater,    // a candidate equal to the running best replaces it
  kEarlier,  // only a strictly better candidate replaces the running best
};

struct MappingOptions {
  double threshold = 0.8;
  TieBreak tie_break = TieBreak::kLater;
};

struct MappingResult {
  int index = -1;           // 1-based line index, or -1
  double confidence = 0;    // confidence of `index`, or best seen below
                            // threshold when index == -1
  friend bool operator==(const MappingResult&, const MappingResult&) = default;
};

// Maps a border content list to the 1-based index of the best-matching
// content line. Empty borders and empty lines never match.
MappingResult MapBorderToIndex(const std::vector<std::string>& border,
                               const std::vector<std::vector<std::string>>& lines,
                               const MappingOptions& opts = {});

// Per-row and per-column non-null contents of a sheet.
struct SheetLines {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<std::string>> cols;

  explicit SheetLines(const Sheet& s);
};

// Assembles a range from four mapped borders. Throws UnmappableTableError
// naming the first edge ("top", "bottom", "left", "right") that fails.
TableRange BoundariesToRange(const BorderPrediction& t, const SheetLines& lines,
                             const MappingOptions& opts = {});
TableRange BoundariesToRange(const BorderPrediction& t, const Sheet& s,
                             const MappingOptions& opts = {});

// Exact-match detection score with one-to-one greedy matching in input
// order. `extra_false_positives` counts predicted tables that produced no
// range (unmappable), which still count as predictions.
PRFScore ScoreTableDetection(const std::vector<TableRange>& pred,
                             const std::vector<TableRange>& truth,
                             std::size_t extra_false_positives = 0);

double RangeIou(const TableRange& a, const TableRange& b);

// Detection score where a prediction matches an unmatched truth range when
// their intersection-over-union reaches `min_iou`. Analysis only.
PRFScore ScoreTableDetectionIou(const std::vector<TableRange>& pred,
                                const std::vector<TableRange>& truth,
                                double min_iou,
                                std::size_t extra_false_positives = 0);

}  // namespace sheetvis

#endif  // SHEETVIS_METRICS_HPP_
