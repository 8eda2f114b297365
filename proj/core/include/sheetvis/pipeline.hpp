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

// End-to-end commands: ingest -> gen -> run -> score.
//
// Run directory layout written by gen:
//   tasks.jsonl           one TaskInstance per line
//   gen.json              generation parameters
//   gen_skipped.jsonl     combinations that were not generated, with reasons
//   images/<stem>.png     rendered sheet, <stem> = workbook__sheet__setting
//   images/<stem>.layout.json
//   sheets/<stem>.json    the transformed sheet
// run adds responses.jsonl, run.json and audit.jsonl; score adds
// report.json and report.csv.

#ifndef SHEETVIS_PIPELINE_HPP_
#define SHEETVIS_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sheetvis/client.hpp"
#include "sheetvis/metrics.hpp"
#include "sheetvis/prompt.hpp"
#include "sheetvis/render.hpp"
#include "sheetvis/task.hpp"
#include "sheetvis/transform.hpp"

namespace sheetvis {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ExitCode { kOk = 0, kFatal = 1, kPartial = 2 };

// Replaces every character outside [A-Za-z0-9._-] with '_'.
std::string SanitizeStem(std::string_view s);

// Workbook files (.xlsx, .xlsm, .json) in `path`, sorted by name; `path`
// itself when it is a file. Sidecars ("*.tables.json") and names starting
// with '_' are skipped.
std::vector<std::filesystem::path> ListWorkbookFiles(
    const std::filesystem::path& path);

struct IngestOptions {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out_dir;
  RenderConfig render;
};

struct IngestResult {
  int loaded = 0;
  int failed = 0;
  nlohmann::json report;  // also written to out_dir/_ingest_report.json
  ExitCode exit = ExitCode::kOk;
};

// Throws ConfigError for an empty input list.
IngestResult CmdIngest(const IngestOptions& opts);

struct GenOptions {
  std::filesystem::path corpus;
  std::filesystem::path out_dir;
  std::vector<TaskKind> tasks = {kAllTasks.begin(), kAllTasks.end()};
  std::vector<Setting> settings = {kAllSettings.begin(), kAllSettings.end()};
  std::vector<Shot> shots = {Shot::kZero};
  std::uint64_t seed = 0;
  std::size_t k_spatial = kDefaultSpatialQueries;
  RenderConfig render;
  std::optional<std::filesystem::path> templates_dir;
  int threads = 0;  // 0: hardware concurrency
};

struct SkipRecord {
  std::string what;
  std::string reason;
};

struct GenResult {
  std::size_t instances = 0;
  std::size_t sheets = 0;
  std::vector<SkipRecord> skipped;
};

GenResult CmdGen(const GenOptions& opts);

std::vector<TaskInstance> LoadTasks(const std::filesystem::path& tasks_jsonl);

struct RunOptions {
  std::filesystem::path tasks_file;
  std::filesystem::path responses_file;  // default: next to tasks_file
  std::string model = "oracle";          // "oracle" or "http"
  ModelConfig model_config;
  std::optional<NoiseSpec> noise;
  int repetitions = 3;
  int threads = 0;
};

struct RunResult {
  std::size_t completed = 0;
  std::size_t reused = 0;
  std::size_t errors = 0;
  ExitCode exit = ExitCode::kOk;
};

RunResult CmdRun(const RunOptions& opts);

struct ResponseRecord {
  std::string id;
  int repetition = 1;
  std::optional<std::string> text;
  std::string error_kind;
  std::string error;
};

std::vector<ResponseRecord> LoadResponses(const std::filesystem::path& path);

struct ScoreOptions {
  std::filesystem::path tasks_file;
  std::filesystem::path responses_file;  // default: next to tasks_file
  std::filesystem::path out_dir;         // default: tasks_file's directory
  MappingOptions mapping;
  bool contiguous_lcs = false;  // score "ocr_lcs" with contiguous runs
};

struct ScoreRow {
  std::string task;  // ocr_strict, ocr_lcs, spatial, format, table, format_<f>
  Setting setting = Setting::kVanilla;
  Shot shot = Shot::kZero;
  int repetition = 0;  // 0 = mean over repetitions
  PRFScore score;
  std::size_t instances = 0;
  std::size_t rejects = 0;
  std::size_t unmappable = 0;
  std::size_t missing = 0;
  std::size_t errors = 0;
};

struct RunReport {
  std::vector<ScoreRow> rows;
  nlohmann::json meta;
  std::vector<std::string> notes;
  std::vector<std::string> flagged;  // "<id>#<rep>: why"
  std::size_t accounted = 0;         // instance-repetition pairs scored

  nlohmann::json ToJson() const;
  std::string ToCsv() const;
};

// Throws ScoringError when a response names an unknown instance.
RunReport CmdScore(const ScoreOptions& opts);

struct DemoOptions {
  std::filesystem::path out_dir;
  std::uint64_t seed = 2024;
  int repetitions = 3;
  std::optional<NoiseSpec> noise;
};

RunReport CmdDemo(const DemoOptions& opts);

}  // namespace sheetvis

#endif  // SHEETVIS_PIPELINE_HPP_
