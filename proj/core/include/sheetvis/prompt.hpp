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

// Task prompts. Each (task, setting, shot) has a template with named
// placeholders:
//
//   {QUERIES}       spatial task: the values to locate, one per line
//   {FORMAT}        format task: wording of the format asked for
//   {ADDRESS_FORM}  how addresses must be written
//   {SETTING_NOTE}  what the image preprocessing did, if anything
//   {EXEMPLAR}      one-shot: a pointer to the worked example
//   {GRAMMAR}       the required output format
//
// The built-in templates can be written out with WriteDefaultTemplates and
// edited; a directory of "<task>__<setting>__<shot>.txt" files overrides
// them key by key.

#ifndef SHEETVIS_PROMPT_HPP_
#define SHEETVIS_PROMPT_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sheetvis/parsing.hpp"
#include "sheetvis/transform.hpp"
#include "sheetvis/truth.hpp"

namespace sheetvis {

enum class TaskKind { kOcr, kSpatial, kFormat, kTable };

inline constexpr std::array<TaskKind, 4> kAllTasks = {
    TaskKind::kOcr, TaskKind::kSpatial, TaskKind::kFormat, TaskKind::kTable};

// "ocr", "spatial", "format", "table".
std::string_view TaskName(TaskKind t);
TaskKind TaskFromName(std::string_view name);

enum class Shot { kZero, kOne };

std::string_view ShotName(Shot s);  // "zero" / "one"
Shot ShotFromName(std::string_view name);

// Returns false (and a reason) for combinations that are never generated.
bool IsPermitted(TaskKind task, Setting setting, std::string* reason = nullptr);

// Output grammar the model is asked for.
Grammar GrammarFor(TaskKind task, Setting setting);

// Address notation for spatial and format answers: A1 when the image shows
// address tags, row,col otherwise.
AddressForm AddressFormFor(Setting setting);

struct Exemplar {
  std::string image_ref;
  std::string user_text;
  std::string answer_text;
  friend bool operator==(const Exemplar&, const Exemplar&) = default;
};

struct PromptBundle {
  std::string system_text;
  std::string user_text;
  std::string image_ref;
  Grammar expected_grammar = Grammar::kOcrLines;
  Shot shot = Shot::kZero;
  std::optional<Exemplar> exemplar;
  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

struct PromptRequest {
  TaskKind task = TaskKind::kOcr;
  Setting setting = Setting::kVanilla;
  Shot shot = Shot::kZero;
  std::string image_ref;
  std::vector<std::string> queries;      // spatial
  std::optional<VisualFormat> format;    // format
  std::optional<Exemplar> exemplar;      // required iff shot == kOne
};

std::string TemplateKey(TaskKind task, Setting setting, Shot shot);

class PromptTemplates {
 public:
  // Built-in templates only.
  PromptTemplates() = default;

  // Built-ins overridden by every "<key>.txt" found in `dir`. Throws
  // ConfigError when `dir` is not a directory or a file name is not a key.
  static PromptTemplates FromDirectory(const std::filesystem::path& dir);

  std::string Get(TaskKind task, Setting setting, Shot shot) const;
  static std::string Builtin(TaskKind task, Setting setting, Shot shot);

 private:
  std::map<std::string, std::string> overrides_;
};

// Writes one file per permitted key.
void WriteDefaultTemplates(const std::filesystem::path& dir);

// Throws ConfigError for forbidden combinations, a missing query list or
// format, or an exemplar that does not match the shot.
PromptBundle BuildPrompt(const PromptRequest& req,
                         const PromptTemplates& templates = PromptTemplates());

}  // namespace sheetvis

#endif  // SHEETVIS_PROMPT_HPP_
