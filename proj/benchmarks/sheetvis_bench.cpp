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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "sheetvis/client.hpp"
#include "sheetvis/metrics.hpp"
#include "sheetvis/parsing.hpp"
#include "sheetvis/render.hpp"
#include "sheetvis/synth.hpp"
#include "sheetvis/transform.hpp"
#include "sheetvis/truth.hpp"

namespace sheetvis {
namespace {

std::vector<std::string> RandomTokens(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out(n);
  for (std::string& s : out) s = "v" + std::to_string(rng() % 64);
  return out;
}

void BM_LcsLength(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::string> a = RandomTokens(n, 1);
  std::vector<std::string> b = RandomTokens(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(LcsLength(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LcsLength)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

Workbook BenchWorkbook() {
  SynthSpec spec;
  spec.seed = 3;
  spec.sheet_rows = {60, 60};
  spec.sheet_cols = {20, 20};
  spec.table_count = {3, 3};
  return Generate(spec);
}

void BM_BoundariesToRange(benchmark::State& state) {
  Workbook wb = BenchWorkbook();
  const NamedSheet& ns = wb.sheets[0];
  SheetLines lines(ns.sheet);
  TableTruth truth = ExtractTableBoundaries(ns.sheet, ns.tables);
  for (auto _ : state) {
    for (const BorderContents& b : truth.boundaries) {
      benchmark::DoNotOptimize(BoundariesToRange(ToPrediction(b), lines));
    }
  }
}
BENCHMARK(BM_BoundariesToRange);

void BM_Rasterize(benchmark::State& state) {
  Workbook wb = BenchWorkbook();
  Sheet s = ApplySetting(wb.sheets[0].sheet, static_cast<Setting>(state.range(0)));
  LayoutMap lm = Layout(s);
  for (auto _ : state) benchmark::DoNotOptimize(Rasterize(s, lm));
  state.SetLabel(std::string(SettingName(static_cast<Setting>(state.range(0)))));
}
BENCHMARK(BM_Rasterize)->DenseRange(0, 3);

void BM_ParseOcr(benchmark::State& state) {
  Workbook wb = BenchWorkbook();
  std::string answer = SerializeOcr(ExtractOcr(wb.sheets[0].sheet).Texts());
  for (auto _ : state) benchmark::DoNotOptimize(ParseOcr(answer));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * answer.size()));
}
BENCHMARK(BM_ParseOcr);

void BM_ParseFormat(benchmark::State& state) {
  std::string answer;
  for (int r = 1; r <= 200; ++r) answer += "A" + std::to_string(r) + ", C" + std::to_string(r) + "\n";
  answer += "D1:F40\n";
  for (auto _ : state) {
    benchmark::DoNotOptimize(ParseFormat(answer, AddressForm::kA1));
  }
}
BENCHMARK(BM_ParseFormat);

}  // namespace
}  // namespace sheetvis

BENCHMARK_MAIN();
