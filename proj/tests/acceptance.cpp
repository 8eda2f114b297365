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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails. Every threshold below is fixed.

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sheetvis/client.hpp"
#include "sheetvis/errors.hpp"
#include "sheetvis/ingest.hpp"
#include "sheetvis/metrics.hpp"
#include "sheetvis/parsing.hpp"
#include "sheetvis/pipeline.hpp"
#include "sheetvis/render.hpp"
#include "sheetvis/synth.hpp"
#include "sheetvis/transform.hpp"
#include "sheetvis/truth.hpp"
#include "test_util.hpp"

namespace sheetvis {
namespace {

namespace fs = std::filesystem;
using testing::ReadAll;
using testing::TempDir;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_++ < 5) first_ += (first_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  std::string Summary() const {
    return failures_ == 0 ? ""
                          : std::to_string(failures_) + " failure(s): " + first_;
  }

 private:
  std::size_t failures_ = 0;
  std::string first_;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Fmt(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

fs::path WriteDemoCorpus(const TempDir& dir) {
  fs::path corpus = dir / "corpus";
  fs::create_directories(corpus);
  for (const Workbook& wb : DemoCorpus()) {
    SaveJson(wb, corpus / (wb.name + ".json"));
  }
  return corpus;
}

std::vector<TaskInstance> DemoInstances(const TempDir& dir, TaskKind task) {
  GenOptions g;
  g.corpus = WriteDemoCorpus(dir);
  g.out_dir = dir / "run";
  g.tasks = {task};
  CmdGen(g);
  return LoadTasks(g.out_dir / "tasks.jsonl");
}

// Oracle mode over the demo corpus scores exactly 1 everywhere.
Outcome OraclePerfection() {
  TempDir dir;
  auto start = std::chrono::steady_clock::now();
  DemoOptions o;
  o.out_dir = dir.path();
  RunReport rep = CmdDemo(o);
  double secs = Seconds(start);

  Checker c;
  for (const ScoreRow& row : rep.rows) {
    c.Expect(row.score.precision == 1.0 && row.score.recall == 1.0 &&
                 row.score.f1 == 1.0,
             row.task + "/" + std::string(SettingName(row.setting)) + " below 1");
  }
  std::size_t combos = 0;
  for (TaskKind t : kAllTasks) {
    std::string name = t == TaskKind::kOcr ? "ocr_lcs" : std::string(TaskName(t));
    for (Setting s : kAllSettings) {
      if (!IsPermitted(t, s)) continue;
      for (Shot shot : {Shot::kZero, Shot::kOne}) {
        bool found = std::any_of(rep.rows.begin(), rep.rows.end(), [&](const ScoreRow& r) {
          return r.task == name && r.setting == s && r.shot == shot &&
                 r.repetition == 0 && r.instances > 0;
        });
        c.Expect(found, "no row for " + name + "/" + std::string(SettingName(s)));
        ++combos;
      }
    }
  }
  c.Expect(rep.flagged.empty(), "flagged responses");
  c.Expect(secs < 60, "took " + Fmt("%.1f s", secs));
  return {c.ok(), std::to_string(combos) + " task/setting/shot combinations, " +
                      std::to_string(rep.accounted) + " scored pairs, " +
                      Fmt("%.2f s", secs) + (c.ok() ? "" : "; " + c.Summary())};
}

// LCS F1 never falls below strict F1 under random noise.
Outcome LcsDominance() {
  TempDir dir;
  std::vector<TaskInstance> ocr = DemoInstances(dir, TaskKind::kOcr);
  Checker c;
  std::size_t checks = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rate(0.0, 0.5);
    NoiseSpec n;
    n.drop_rate = rate(rng);
    n.insert_rate = rate(rng);
    n.value_corrupt_rate = rate(rng);
    n.seed = seed;
    for (const TaskInstance& t : ocr) {
      std::vector<std::string> pred = ParseOcr(Perturb(OracleAnswer(t), t, n));
      double strict = ScoreOcrStrict(pred, t.ocr).f1;
      double lcs = ScoreOcrLcs(pred, t.ocr).f1;
      c.Expect(lcs >= strict, t.id + " seed " + std::to_string(seed));
      ++checks;
    }
  }
  return {c.ok(), std::to_string(checks) + " instance checks over 200 seeds" +
                      (c.ok() ? "" : "; " + c.Summary())};
}

// Dropping k of n distinct cells: LCS P=1, R=(n-k)/n; strict matches the
// prefix before the first drop.
Outcome DropLaw() {
  const int n = 20;
  Sheet s(4, 5);
  for (int i = 0; i < n; ++i) {
    s.at(i / 5 + 1, i % 5 + 1).text = "cell " + std::to_string(i + 1);
  }
  OcrTruth truth = ExtractOcr(s);
  std::vector<std::string> texts = truth.Texts();
  Checker c;
  c.Expect(static_cast<int>(texts.size()) == n, "sheet does not hold 20 cells");
  std::mt19937_64 rng(20);
  std::size_t trials = 0;
  for (int k : {0, 1, 2, 5}) {
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      std::set<int> dropped(idx.begin(), idx.begin() + k);
      std::vector<std::string> kept;
      for (int i = 0; i < n; ++i) {
        if (!dropped.count(i)) kept.push_back(texts[i]);
      }
      std::vector<std::string> pred = ParseOcr(SerializeOcr(kept));
      PRFScore lcs = ScoreOcrLcs(pred, truth);
      PRFScore strict = ScoreOcrStrict(pred, truth);
      std::size_t prefix = dropped.empty() ? n : static_cast<std::size_t>(*dropped.begin());
      std::string tag = "k=" + std::to_string(k);
      c.Expect(lcs.precision == 1.0, tag + " precision");
      c.Expect(lcs.recall == static_cast<double>(n - k) / n, tag + " recall");
      c.Expect(strict.matched == prefix, tag + " strict matched");
      ++trials;
      if (k == 0) break;
    }
  }
  return {c.ok(), std::to_string(trials) + " drop patterns, k in {0,1,2,5}, n=20" +
                      (c.ok() ? "" : "; " + c.Summary())};
}

// Shifting every answered row by one matches nothing.
Outcome MisalignmentLaw() {
  TempDir dir;
  std::vector<TaskInstance> spatial = DemoInstances(dir, TaskKind::kSpatial);
  NoiseSpec n;
  n.row_offset = 1;
  Checker c;
  std::size_t checked = 0;
  for (const TaskInstance& t : spatial) {
    Sheet sheet = SheetFromJson(nlohmann::json::parse(
                                    ReadAll(dir / "run" / t.sheet_path)))
                      .sheet;
    bool coincident = false;
    for (int r = 1; r < sheet.rows(); ++r) {
      std::vector<std::string> a = sheet.RowContents(r);
      coincident |= !a.empty() && a == sheet.RowContents(r + 1);
    }
    c.Expect(!coincident, t.id + " has self-coincident rows");
    std::string answer = Perturb(OracleAnswer(t), t, n);
    PRFScore s = ScorePairs(ParseSpatial(answer, t.form), t.spatial);
    c.Expect(s.matched == 0, t.id + " matched " + std::to_string(s.matched));
    c.Expect(s.predicted == t.spatial.queries.size(), t.id + " lost pairs");
    ++checked;
  }
  return {c.ok() && checked > 0, std::to_string(checked) + " spatial instances" +
                                     (c.ok() ? "" : "; " + c.Summary())};
}

// Exhaustive LCS check over {a,b,c}* up to length 7. The oracle gives every
// sequence the set of its subsequences as a bitset over all sequences sorted
// by length; the LCS of a pair is the length of the longest sequence in the
// intersection.
Outcome LcsEquivalence() {
  auto start = std::chrono::steady_clock::now();
  const int kMaxLen = 7;
  std::vector<std::vector<std::string>> seqs;
  std::vector<std::size_t> len_of;
  std::vector<std::size_t> first_of_len(kMaxLen + 2, 0);
  std::vector<std::size_t> pow3(kMaxLen + 1, 1);
  for (int l = 1; l <= kMaxLen; ++l) pow3[l] = pow3[l - 1] * 3;
  for (int l = 0; l <= kMaxLen; ++l) {
    first_of_len[l] = seqs.size();
    for (std::size_t code = 0; code < pow3[l]; ++code) {
      std::vector<std::string> s(l);
      std::size_t v = code;
      for (int i = l - 1; i >= 0; --i, v /= 3) s[i] = std::string(1, "abc"[v % 3]);
      seqs.push_back(std::move(s));
      len_of.push_back(l);
    }
  }
  first_of_len[kMaxLen + 1] = seqs.size();
  const std::size_t total = seqs.size();
  const std::size_t words = (total + 63) / 64;
  auto index_of = [&](const std::vector<std::string>& s) {
    std::size_t code = 0;
    for (const std::string& x : s) code = code * 3 + static_cast<std::size_t>(x[0] - 'a');
    return first_of_len[s.size()] + code;
  };
  std::vector<std::uint64_t> subs(total * words, 0);
  for (std::size_t i = 0; i < total; ++i) {
    const std::vector<std::string>& s = seqs[i];
    for (std::uint32_t mask = 0; mask < (1u << s.size()); ++mask) {
      std::vector<std::string> sub;
      for (std::size_t b = 0; b < s.size(); ++b) {
        if (mask >> b & 1u) sub.push_back(s[b]);
      }
      std::size_t j = index_of(sub);
      subs[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  Checker c;
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint64_t* a = &subs[i * words];
    for (std::size_t j = 0; j < total; ++j) {
      const std::uint64_t* b = &subs[j * words];
      std::size_t best = 0;
      for (std::size_t w = words; w-- > 0;) {
        std::uint64_t both = a[w] & b[w];
        if (both) {
          best = len_of[w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(both))];
          break;
        }
      }
      if (LcsLength(seqs[i], seqs[j]) != best) {
        c.Expect(false, "pair " + std::to_string(i) + "," + std::to_string(j));
      }
    }
  }
  double secs = Seconds(start);
  c.Expect(secs < 10, "took " + Fmt("%.1f s", secs));
  return {c.ok(), std::to_string(total * total) + " pairs, " + Fmt("%.2f s", secs) +
                      (c.ok() ? "" : "; " + c.Summary())};
}

// Exact boundary-to-range recovery on oracle boundaries, then under
// per-token value corruption at rate 0.1.
Outcome BoundaryRecovery() {
  std::vector<Workbook> corpus = GenerateCorpus(SynthSpec{}, 100, "recovery");
  std::size_t tables = 0;
  std::size_t exact = 0;
  std::size_t clean_wrong = 0;
  std::size_t noisy_ok = 0;
  std::size_t noisy_unmappable = 0;
  std::size_t noisy_wrong = 0;
  std::uint64_t seed = 0;
  for (const Workbook& wb : corpus) {
    for (const NamedSheet& ns : wb.sheets) {
      SheetLines lines(ns.sheet);
      TaskInstance t;
      t.id = wb.name + "__" + ns.name;
      t.task = TaskKind::kTable;
      t.grammar = Grammar::kFourBoundariesJson;
      t.tables = ExtractTableBoundaries(ns.sheet, ns.tables);
      for (std::size_t i = 0; i < ns.tables.size(); ++i) {
        ++tables;
        try {
          TableRange r = BoundariesToRange(ToPrediction(t.tables.boundaries[i]), lines);
          (r == ns.tables[i] ? exact : clean_wrong) += 1;
        } catch (const UnmappableTableError&) {
        }
      }
      NoiseSpec n;
      n.value_corrupt_rate = 0.1;
      n.seed = seed++;
      std::vector<BorderPrediction> noisy =
          ParseFourBoundaries(Perturb(OracleAnswer(t), t, n));
      for (std::size_t i = 0; i < noisy.size() && i < ns.tables.size(); ++i) {
        try {
          TableRange r = BoundariesToRange(noisy[i], lines);
          (r == ns.tables[i] ? noisy_ok : noisy_wrong) += 1;
        } catch (const UnmappableTableError&) {
          ++noisy_unmappable;
        }
      }
    }
  }
  double clean_rate = tables ? static_cast<double>(exact) / tables : 0;
  double noisy_rate = tables ? static_cast<double>(noisy_ok) / tables : 0;
  bool pass = exact == tables && clean_wrong == 0 && noisy_rate >= 0.9 &&
              noisy_wrong == 0 && noisy_ok + noisy_unmappable == tables;
  std::ostringstream d;
  d << tables << " tables; oracle recovery " << Fmt("%.4f", clean_rate)
    << "; corrupt 0.1 recovery " << Fmt("%.4f", noisy_rate) << " (need 0.9000), "
    << noisy_unmappable << " unmappable, " << noisy_wrong << " wrong ranges";
  return {pass, d.str()};
}

// Inserts a private ancillary chunk before IEND so the file reaches .
std::vector<std::uint8_t> PadPng(std::vector<std::uint8_t> png, std::size_t size) {
  const std::size_t iend = png.size() - 12;
  const std::size_t data_len = size - png.size() - 12;
  std::vector<std::uint8_t> chunk;
  for (int s = 24; s >= 0; s -= 8) chunk.push_back(static_cast<std::uint8_t>(data_len >> s));
  for (char ch : {'p', 'r', 'V', 't'}) chunk.push_back(static_cast<std::uint8_t>(ch));
  chunk.resize(chunk.size() + data_len, 0);
  uLong crc = crc32(0L, chunk.data() + 4, static_cast<uInt>(chunk.size() - 4));
  for (int s = 24; s >= 0; s -= 8) chunk.push_back(static_cast<std::uint8_t>(crc >> s));
  png.insert(png.begin() + static_cast<std::ptrdiff_t>(iend), chunk.begin(), chunk.end());
  return png;
}

Outcome ImageConstraints() {
  Checker c;
  auto check = [&](const std::vector<std::uint8_t>& png, bool want, const std::string& what) {
    ImageValidation v = ValidateImage(png);
    c.Expect(v.ok == want, what + (want ? " rejected" : " accepted"));
  };
  const Rgb white{255, 255, 255};
  for (int d : {49, 50, 10000, 10001}) {
    bool want = d >= 50 && d <= 10000;
    check(EncodePng(RgbImage(d, 50, white)), want, "width " + std::to_string(d));
    check(EncodePng(RgbImage(50, d, white)), want, "height " + std::to_string(d));
  }
  RgbImage noise(1400, 1400, white);
  std::mt19937 rng(7);
  for (std::uint8_t& p : noise.pixels) p = static_cast<std::uint8_t>(rng());
  std::vector<std::uint8_t> big = EncodePng(noise);
  c.Expect(big.size() > kMaxImageBytes, "noise image is under the size limit");
  check(big, false, Fmt("%.1f MB noise image", big.size() / 1e6));
  std::vector<std::uint8_t> small = EncodePng(RgbImage(100, 100, white));
  check(PadPng(small, kMaxImageBytes - 1), true, "size limit - 1");
  check(PadPng(small, kMaxImageBytes), false, "size limit");
  bool threw = false;
  try {
    std::vector<std::uint8_t> junk = {1, 2, 3, 4};
    ValidateImage(junk);
  } catch (const ImageFormatError&) {
    threw = true;
  }
  c.Expect(threw, "undecodable bytes not reported");
  return {c.ok(), "dims 49/50/10000/10001 both axes, bytes " +
                      std::to_string(kMaxImageBytes - 1) + "/" +
                      std::to_string(kMaxImageBytes) +
                      (c.ok() ? "" : "; " + c.Summary())};
}

Outcome Determinism() {
  TempDir dir;
  fs::path corpus = WriteDemoCorpus(dir);
  std::vector<std::string> tasks;
  std::vector<std::string> reports;
  for (const char* name : {"first", "second"}) {
    GenOptions g;
    g.corpus = corpus;
    g.out_dir = dir / name;
    g.shots = {Shot::kZero, Shot::kOne};
    g.seed = 77;
    CmdGen(g);
    RunOptions r;
    r.tasks_file = g.out_dir / "tasks.jsonl";
    NoiseSpec n;
    n.drop_rate = 0.1;
    n.insert_rate = 0.1;
    n.value_corrupt_rate = 0.1;
    n.seed = 5;
    r.noise = n;
    CmdRun(r);
    ScoreOptions s;
    s.tasks_file = r.tasks_file;
    CmdScore(s);
    tasks.push_back(ReadAll(g.out_dir / "tasks.jsonl"));
    reports.push_back(ReadAll(g.out_dir / "report.json"));
  }
  Checker c;
  c.Expect(!tasks[0].empty() && tasks[0] == tasks[1], "tasks.jsonl differs");
  c.Expect(!reports[0].empty() && reports[0] == reports[1], "report.json differs");
  return {c.ok(), std::to_string(tasks[0].size()) + " + " +
                      std::to_string(reports[0].size()) + " bytes compared" +
                      (c.ok() ? "" : "; " + c.Summary())};
}

Outcome TransformContracts() {
  fs::path data = SHEETVIS_TEST_DATA;
  Workbook wb = LoadJson(data / "golden_workbook.json");
  const Sheet& s = wb.sheets.at(0).sheet;
  Checker c;

  Sheet widths = ApplySetting(s, Setting::kColWidthAdjust);
  // Longest texts: 25 and 26 characters (capped), then "12".
  c.Expect(widths.col_width(1) == 16.0, "col A width");
  c.Expect(widths.col_width(2) == 16.0, "col B width");
  c.Expect(widths.col_width(3) == 4.0, "col C width");
  for (int r = 1; r <= s.rows(); ++r) {
    for (int col = 1; col <= s.cols(); ++col) {
      c.Expect(widths.at(r, col) == s.at(r, col), "width change touched a cell");
    }
  }

  Sheet styled = ApplySetting(s, Setting::kStyleChange);
  c.Expect(styled.col_widths() == widths.col_widths(), "style change widths");
  for (int col = 1; col <= 3; ++col) {
    const CellData& cell = styled.at(1, col);
    c.Expect(!cell.format.bold, "bold kept");
    c.Expect(!cell.format.fill.has_value(), "fill kept");
    c.Expect(cell.format.border_bottom, "border dropped");
    c.Expect(cell.text == s.at(1, col).text, "text changed");
  }

  Sheet tagged = ApplySetting(s, Setting::kAddressAugment);
  c.Expect(tagged.at(1, 1).text == "A1, day", "A1 text is \"" + tagged.at(1, 1).text + "\"");
  c.Expect(tagged.at(4, 2).text == "B4, 88", "B4 text");
  c.Expect(tagged.at(1, 1).format == s.at(1, 1).format, "tagging changed styles");
  c.Expect(tagged.col_width(1) == 20.0, "tagged col A width");
  c.Expect(tagged.col_width(3) == 7.0, "tagged col C width");

  TempDir dir;
  fs::create_directories(dir / "corpus");
  fs::copy_file(data / "golden_workbook.json", dir / "corpus" / "golden.json");
  GenOptions g;
  g.corpus = dir / "corpus";
  g.out_dir = dir / "run";
  g.tasks = {TaskKind::kOcr};
  g.settings = {Setting::kAddressAugment};
  CmdGen(g);
  std::vector<TaskInstance> tasks = LoadTasks(g.out_dir / "tasks.jsonl");
  c.Expect(tasks.size() == 1, "expected one instance");
  if (!tasks.empty()) {
    std::string source = ReadAll(g.out_dir / tasks[0].sheet_path);
    c.Expect(source.find("\"A1, day\"") != std::string::npos, "source sheet lacks A1, day");
    std::string png = ReadAll(g.out_dir / tasks[0].image_path);
    std::string golden = ReadAll(data / "golden_address_augment.png");
    auto bytes = [](const std::string& s) {
      return std::span<const std::uint8_t>(
          reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
    };
    RgbImage got = DecodePng(bytes(png));
    RgbImage want = DecodePng(bytes(golden));
    c.Expect(got.width == want.width && got.height == want.height &&
                 got.pixels == want.pixels,
             "rendered image differs from the golden image");
  }
  return {c.ok(), "widths, styles, tags and golden pixels" +
                      (c.ok() ? "" : "; " + c.Summary())};
}

// Columns checked against an odometer over bijective base-26 digits.
Outcome AddressRoundTrip() {
  Checker c;
  std::string letters;
  for (int col = 1; col <= 1000; ++col) {
    int i = static_cast<int>(letters.size()) - 1;
    while (i >= 0 && letters[i] == 'Z') letters[i--] = 'A';
    if (i < 0) {
      letters.insert(letters.begin(), 'A');
    } else {
      ++letters[i];
    }
    for (int row = 1; row <= 1000; ++row) {
      CellAddress a{row, col};
      std::string a1 = ToA1(a);
      if (a1 != letters + std::to_string(row)) c.Expect(false, "ToA1 " + a1);
      if (FromA1(a1) != a) c.Expect(false, "FromA1 " + a1);
      std::string rc = ToRc(a);
      if (rc != std::to_string(row) + "," + std::to_string(col)) c.Expect(false, "ToRc " + rc);
      if (FromRc(rc) != a) c.Expect(false, "FromRc " + rc);
    }
  }
  return {c.ok(), "1000000 addresses in A1 and rc form" +
                      (c.ok() ? "" : "; " + c.Summary())};
}

}  // namespace
}  // namespace sheetvis

int main() {
  using sheetvis::Outcome;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"oracle perfection", sheetvis::OraclePerfection},
      {"lcs dominance", sheetvis::LcsDominance},
      {"drop-k law", sheetvis::DropLaw},
      {"misalignment law", sheetvis::MisalignmentLaw},
      {"lcs oracle equivalence", sheetvis::LcsEquivalence},
      {"boundary recovery", sheetvis::BoundaryRecovery},
      {"image constraints", sheetvis::ImageConstraints},
      {"determinism", sheetvis::Determinism},
      {"transform contracts", sheetvis::TransformContracts},
      {"address round trip", sheetvis::AddressRoundTrip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %-24s %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
