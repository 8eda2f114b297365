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

// One probing task instance: an image, a prompt and the ground truth needed
// to score any answer to it. Instances are stored one per line in
// tasks.jsonl.

#ifndef SHEETVIS_TASK_HPP_
#define SHEETVIS_TASK_HPP_

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sheetvis/parsing.hpp"
#include "sheetvis/prompt.hpp"
#include "sheetvis/transform.hpp"
#include "sheetvis/truth.hpp"

namespace sheetvis {

struct TaskInstance {
  std::string id;
  std::string workbook;
  std::string sheet;
  TaskKind task = TaskKind::kOcr;
  Setting setting = Setting::kVanilla;
  Shot shot = Shot::kZero;
  std::optional<VisualFormat> format;  // format task only

  // Paths relative to the run directory.
  std::string image_path;
  std::string layout_path;
  std::string sheet_path;  // transformed sheet, canonical JSON

  int sheet_rows = 0;
  int sheet_cols = 0;

  PromptBundle prompt;
  Grammar grammar = Grammar::kOcrLines;
  AddressForm form = AddressForm::kRc;

  // Ground truth; only the member for `task` is meaningful.
  OcrTruth ocr;
  SpatialTruth spatial;
  AddressSet format_cells;
  TableTruth tables;

  friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

// "<workbook>__<sheet>__<task>[-<format>]__<setting>__<shot>".
std::string MakeInstanceId(const std::string& workbook, const std::string& sheet,
                           TaskKind task, std::optional<VisualFormat> format,
                           Setting setting, Shot shot);

nlohmann::json TaskToJson(const TaskInstance& t);
// Throws SchemaError.
TaskInstance TaskFromJson(const nlohmann::json& j);

}  // namespace sheetvis

#endif  // SHEETVIS_TASK_HPP_
