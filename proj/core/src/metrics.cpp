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

#include "sheetvis/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sheetvis/errors.hpp"

namespace sheetvis {

PRFScore PRFScore::FromCounts(std::size_t matched, std::size_t predicted,
                              std::size_t truth) {
  PRFScore s;
  s.matched = matched;
  s.predicted = predicted;
  s.truth = truth;
  if (predicted == 0 && truth == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  s.precision = predicted == 0 ? 0.0 : static_cast<double>(matched) / predicted;
  s.recall = truth == 0 ? 0.0 : static_cast<double>(matched) / truth;
  double sum = s.precision + s.recall;
  s.f1 = sum == 0 ? 0.0 : 2 * s.precision * s.recall / sum;
  return s;
}

PRFScore Pool(const std::vector<PRFScore>& parts) {
  std::size_t m = 0, p = 0, t = 0;
  for (const PRFScore& s : parts) {
    m += s.matched;
    p += s.predicted;
    t += s.truth;
  }
  return PRFScore::FromCounts(m, p, t);
}

std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  // Two rolling rows over the shorter sequence.
  const auto& outer = a.size() >= b.size() ? a : b;
  const auto& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> prev(inner.size() + 1, 0), cur(inner.size() + 1, 0);
  for (std::size_t i = 1; i <= outer.size(); ++i) {
    for (std::size_t j = 1; j <= inner.size(); ++j) {
      cur[j] = outer[i - 1] == inner[j - 1] ? prev[j - 1] + 1
                                            : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[inner.size()];
}

std::size_t LongestCommonRun(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  std::size_t best = 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

PRFScore ScoreOcrStrict(const std::vector<std::string>& pred,
                        const OcrTruth& truth) {
  std::size_t n = std::min(pred.size(), truth.sequence.size());
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pred[i] == truth.sequence[i].text) ++m;
  }
  return PRFScore::FromCounts(m, pred.size(), truth.sequence.size());
}

PRFScore ScoreOcrLcs(const std::vector<std::string>& pred,
                     const OcrTruth& truth) {
  return PRFScore::FromCounts(LcsLength(pred, truth.Texts()), pred.size(),
                              truth.sequence.size());
}

PRFScore ScoreOcrContiguous(const std::vector<std::string>& pred,
                            const OcrTruth& truth) {
  return PRFScore::FromCounts(LongestCommonRun(pred, truth.Texts()),
                              pred.size(), truth.sequence.size());
}

PRFScore ScoreOcr(const std::vector<std::string>& pred, const OcrTruth& truth,
                  OcrMatch mode) {
  switch (mode) {
    case OcrMatch::kStrict: return ScoreOcrStrict(pred, truth);
    case OcrMatch::kLcs: return ScoreOcrLcs(pred, truth);
    case OcrMatch::kContiguous: return ScoreOcrContiguous(pred, truth);
  }
  return ScoreOcrLcs(pred, truth);
}

PRFScore ScorePairs(const std::vector<SpatialPair>& pred,
                    const SpatialTruth& truth) {
  std::map<std::string, CellAddress> answers;
  for (const SpatialQuery& q : truth.queries) answers.emplace(q.value, q.answer);
  std::set<std::string> seen;
  std::size_t predicted = 0, matched = 0;
  for (const SpatialPair& p : pred) {
    if (!seen.insert(p.value).second) continue;
    ++predicted;
    auto it = answers.find(p.value);
    if (it != answers.end() && it->second == p.addr) ++matched;
  }
  return PRFScore::FromCounts(matched, predicted, truth.queries.size());
}

PRFScore ScoreAddressSet(const AddressSet& pred, const AddressSet& truth) {
  std::size_t m = 0;
  for (const CellAddress& a : pred) m += truth.count(a);
  return PRFScore::FromCounts(m, pred.size(), truth.size());
}

FormatScores ScoreFormats(const std::array<AddressSet, 6>& pred,
                          const FormatTruth& truth) {
  FormatScores out;
  std::vector<PRFScore> parts;
  for (std::size_t i = 0; i < 6; ++i) {
    out.per_format[i] = ScoreAddressSet(pred[i], truth.cells[i]);
    parts.push_back(out.per_format[i]);
  }
  out.micro = Pool(parts);
  return out;
}

MappingResult MapBorderToIndex(const std::vector<std::string>& border,
                               const std::vector<std::vector<std::string>>& lines,
                               const MappingOptions& opts) {
  MappingResult res;
  if (border.empty()) return res;
  std::vector<std::string> b;
  b.reserve(border.size());
  for (const std::string& s : border) b.push_back(Trim(s));

  double conf = opts.threshold;
  double best_seen = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::vector<std::string>& line = lines[i];
    if (line.empty()) continue;
    const auto& shorter = b.size() <= line.size() ? b : line;
    const auto& longer = b.size() <= line.size() ? line : b;
    const std::size_t s_cnt = shorter.size();
    const std::size_t t_cnt = longer.size();
    for (std::size_t off = 0; off + s_cnt <= t_cnt; ++off) {
      std::size_t hits = 0;
      for (std::size_t j = 0; j < s_cnt; ++j) {
        if (Trim(shorter[j]) == Trim(longer[off + j])) ++hits;
      }
      double c_conf = static_cast<double>(hits) / static_cast<double>(s_cnt);
      best_seen = std::max(best_seen, c_conf);
      bool accept = (res.index == -1 || opts.tie_break == TieBreak::kLater)
                        ? c_conf >= conf
                        : c_conf > conf;
      if (accept) {
        res.index = static_cast<int>(i + 1);
        conf = c_conf;
      }
    }
  }
  res.confidence = res.index == -1 ? best_seen : conf;
  return res;
}

SheetLines::SheetLines(const Sheet& s) {
  rows.reserve(s.rows());
  for (int r = 1; r <= s.rows(); ++r) rows.push_back(s.RowContents(r));
  cols.reserve(s.cols());
  for (int c = 1; c <= s.cols(); ++c) cols.push_back(s.ColumnContents(c));
}

TableRange BoundariesToRange(const BorderPrediction& t, const SheetLines& lines,
                             const MappingOptions& opts) {
  auto map = [&](const std::vector<std::string>& edge,
                 const std::vector<std::vector<std::string>>& candidates,
                 const char* name) {
    MappingResult m = MapBorderToIndex(edge, candidates, opts);
    if (m.index < 0) throw UnmappableTableError(name, m.confidence);
    return m.index;
  };
  int top = map(t.top, lines.rows, "top");
  int bottom = map(t.bottom, lines.rows, "bottom");
  int left = map(t.left, lines.cols, "left");
  int right = map(t.right, lines.cols, "right");
  return TableRange{{top, left}, {bottom, right}}.Normalized();
}

TableRange BoundariesToRange(const BorderPrediction& t, const Sheet& s,
                             const MappingOptions& opts) {
  return BoundariesToRange(t, SheetLines(s), opts);
}

PRFScore ScoreTableDetection(const std::vector<TableRange>& pred,
                             const std::vector<TableRange>& truth,
                             std::size_t extra_false_positives) {
  std::vector<bool> used(truth.size(), false);
  std::size_t m = 0;
  for (const TableRange& p : pred) {
    TableRange np = p.Normalized();
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (!used[i] && truth[i].Normalized() == np) {
        used[i] = true;
        ++m;
        break;
      }
    }
  }
  return PRFScore::FromCounts(m, pred.size() + extra_false_positives,
                              truth.size());
}

double RangeIou(const TableRange& a, const TableRange& b) {
  TableRange x = a.Normalized(), y = b.Normalized();
  long long r0 = std::max(x.top_left.row, y.top_left.row);
  long long r1 = std::min(x.bottom_right.row, y.bottom_right.row);
  long long c0 = std::max(x.top_left.col, y.top_left.col);
  long long c1 = std::min(x.bottom_right.col, y.bottom_right.col);
  long long inter = (r1 >= r0 && c1 >= c0) ? (r1 - r0 + 1) * (c1 - c0 + 1) : 0;
  long long area_x = static_cast<long long>(x.rows()) * x.cols();
  long long area_y = static_cast<long long>(y.rows()) * y.cols();
  return static_cast<double>(inter) /
         static_cast<double>(area_x + area_y - inter);
}

PRFScore ScoreTableDetectionIou(const std::vector<TableRange>& pred,
                                const std::vector<TableRange>& truth,
                                double min_iou,
                                std::size_t extra_false_positives) {
  std::vector<bool> used(truth.size(), false);
  std::size_t m = 0;
  for (const TableRange& p : pred) {
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (!used[i] && RangeIou(p, truth[i]) >= min_iou) {
        used[i] = true;
        ++m;
        break;
      }
    }
  }
  return PRFScore::FromCounts(m, pred.size() + extra_false_positives,
                              truth.size());
}

}  // namespace sheetvis
