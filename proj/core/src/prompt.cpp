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

#include "sheetvis/prompt.hpp"

#include <fstream>
#include <sstream>

#include "sheetvis/errors.hpp"

namespace sheetvis {
namespace {

constexpr std::string_view kSystemText =
    "You are a careful assistant that reads spreadsheet images. Answer only "
    "in the requested output format, without explanations.";

constexpr std::string_view kOcrBody =
    "The image shows a spreadsheet.{SETTING_NOTE}\n"
    "{EXEMPLAR}"
    "Decode the text of every cell sequentially, moving from top to bottom "
    "and left to right. Skip cells that are empty.\n\n"
    "{GRAMMAR}";

constexpr std::string_view kSpatialBody =
    "The image shows a spreadsheet.{SETTING_NOTE}\n"
    "{EXEMPLAR}"
    "For each value below, find the cell that contains it and give that "
    "cell's address. {ADDRESS_FORM}\n\n"
    "Values:\n{QUERIES}\n\n"
    "{GRAMMAR}";

constexpr std::string_view kFormatBody =
    "The image shows a spreadsheet.{SETTING_NOTE}\n"
    "{EXEMPLAR}"
    "List the addresses of all cells that have {FORMAT}. {ADDRESS_FORM}\n\n"
    "{GRAMMAR}";

constexpr std::string_view kTableBody =
    "The image shows a spreadsheet that may contain several tables.{SETTING_NOTE}\n"
    "{EXEMPLAR}"
    "Find every table in the sheet.\n\n"
    "{GRAMMAR}";

constexpr std::string_view kTableBodyRanges =
    "The image shows a spreadsheet that may contain several tables.{SETTING_NOTE}\n"
    "{EXEMPLAR}"
    "Find every table in the sheet and give the cell range it covers.\n\n"
    "{GRAMMAR}";

std::string SettingNote(Setting s) {
  switch (s) {
    case Setting::kVanilla:
      return "";
    case Setting::kColWidthAdjust:
    case Setting::kStyleChange:
      return " Column widths have been fitted to the cell contents.";
    case Setting::kAddressAugment:
      return " Each non-empty cell shows its own address followed by a comma "
             "before its content, for example \"A1, day\".";
  }
  return "";
}

std::string AddressFormText(AddressForm form) {
  if (form == AddressForm::kA1) {
    return "Write addresses in A1 notation (column letters then row number, "
           "for example C2).";
  }
  return "Write addresses as row,column with 1-based numbers counted from the "
         "top-left cell of the image (for example 2,3 for the second row, "
         "third column).";
}

std::string GrammarText(Grammar g) {
  switch (g) {
    case Grammar::kOcrLines:
      return "Output format: one cell text per line, in reading order, with "
             "nothing else on the line.";
    case Grammar::kPairLines:
      return "Output format: one line per value, written as\n"
             "value => address";
    case Grammar::kAddressLines:
      return "Output format: one address per line. Output nothing if no cell "
             "matches.";
    case Grammar::kFourBoundariesJson:
      return "Output format: a JSON array with one object per table. Each "
             "object has the keys \"top\", \"bottom\", \"left\" and \"right\"; "
             "each maps to the list of non-empty cell texts along that edge "
             "of the table, in reading order. Example:\n"
             "[{\"top\": [\"day\", \"cost\"], \"bottom\": [\"sum\", \"10\"], "
             "\"left\": [\"day\", \"sum\"], \"right\": [\"cost\", \"10\"]}]";
    case Grammar::kRangeLines:
      return "Output format: one range per table, one per line, written as "
             "top-left:bottom-right in A1 notation, for example A4:D120.";
  }
  return "";
}

void ReplaceAll(std::string& s, std::string_view key, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = s.find(key, pos)) != std::string::npos) {
    s.replace(pos, key.size(), value);
    pos += value.size();
  }
}

}  // namespace

std::string_view TaskName(TaskKind t) {
  switch (t) {
    case TaskKind::kOcr: return "ocr";
    case TaskKind::kSpatial: return "spatial";
    case TaskKind::kFormat: return "format";
    case TaskKind::kTable: return "table";
  }
  return "ocr";
}

TaskKind TaskFromName(std::string_view name) {
  for (TaskKind t : kAllTasks) {
    if (TaskName(t) == name) return t;
  }
  throw ConfigError("unknown task \"" + std::string(name) + "\"");
}

std::string_view ShotName(Shot s) { return s == Shot::kOne ? "one" : "zero"; }

Shot ShotFromName(std::string_view name) {
  if (name == "zero") return Shot::kZero;
  if (name == "one") return Shot::kOne;
  throw ConfigError("unknown shot \"" + std::string(name) + "\"");
}

bool IsPermitted(TaskKind task, Setting setting, std::string* reason) {
  if (task == TaskKind::kFormat && setting == Setting::kStyleChange) {
    if (reason) {
      *reason =
          "style_change removes bold and fill, so the format task would probe "
          "formats that are no longer in the image";
    }
    return false;
  }
  return true;
}

Grammar GrammarFor(TaskKind task, Setting setting) {
  switch (task) {
    case TaskKind::kOcr: return Grammar::kOcrLines;
    case TaskKind::kSpatial: return Grammar::kPairLines;
    case TaskKind::kFormat: return Grammar::kAddressLines;
    case TaskKind::kTable:
      return setting == Setting::kAddressAugment ? Grammar::kRangeLines
                                                 : Grammar::kFourBoundariesJson;
  }
  return Grammar::kOcrLines;
}

AddressForm AddressFormFor(Setting setting) {
  return setting == Setting::kAddressAugment ? AddressForm::kA1
                                             : AddressForm::kRc;
}

std::string TemplateKey(TaskKind task, Setting setting, Shot shot) {
  return std::string(TaskName(task)) + "__" + std::string(SettingName(setting)) +
         "__" + std::string(ShotName(shot));
}

std::string PromptTemplates::Builtin(TaskKind task, Setting setting, Shot) {
  switch (task) {
    case TaskKind::kOcr: return std::string(kOcrBody);
    case TaskKind::kSpatial: return std::string(kSpatialBody);
    case TaskKind::kFormat: return std::string(kFormatBody);
    case TaskKind::kTable:
      return std::string(setting == Setting::kAddressAugment ? kTableBodyRanges
                                                             : kTableBody);
  }
  return {};
}

PromptTemplates PromptTemplates::FromDirectory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw ConfigError("template directory not found: " + dir.string());
  }
  std::map<std::string, bool> known;
  for (TaskKind t : kAllTasks) {
    for (Setting s : kAllSettings) {
      for (Shot sh : {Shot::kZero, Shot::kOne}) known[TemplateKey(t, s, sh)] = true;
    }
  }
  PromptTemplates out;
  for (const fs::directory_entry& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".txt") continue;
    std::string key = e.path().stem().string();
    if (!known.count(key)) {
      throw ConfigError("unrecognized template file " + e.path().string());
    }
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out.overrides_[key] = ss.str();
  }
  return out;
}

std::string PromptTemplates::Get(TaskKind task, Setting setting,
                                 Shot shot) const {
  auto it = overrides_.find(TemplateKey(task, setting, shot));
  if (it != overrides_.end()) return it->second;
  return Builtin(task, setting, shot);
}

void WriteDefaultTemplates(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (TaskKind t : kAllTasks) {
    for (Setting s : kAllSettings) {
      if (!IsPermitted(t, s)) continue;
      for (Shot sh : {Shot::kZero, Shot::kOne}) {
        std::ofstream out(dir / (TemplateKey(t, s, sh) + ".txt"),
                          std::ios::binary);
        out << PromptTemplates::Builtin(t, s, sh);
        if (!out) throw ConfigError("cannot write templates to " + dir.string());
      }
    }
  }
}

PromptBundle BuildPrompt(const PromptRequest& req,
                         const PromptTemplates& templates) {
  std::string reason;
  if (!IsPermitted(req.task, req.setting, &reason)) {
    throw ConfigError(std::string(TaskName(req.task)) + " x " +
                      std::string(SettingName(req.setting)) +
                      " is not permitted: " + reason);
  }
  if (req.shot == Shot::kOne && !req.exemplar) {
    throw ConfigError("one-shot prompt needs an exemplar");
  }
  if (req.shot == Shot::kZero && req.exemplar) {
    throw ConfigError("zero-shot prompt cannot carry an exemplar");
  }
  if (req.task == TaskKind::kFormat && !req.format) {
    throw ConfigError("format prompt needs a format");
  }

  const AddressForm form = AddressFormFor(req.setting);
  PromptBundle b;
  b.system_text = std::string(kSystemText);
  b.image_ref = req.image_ref;
  b.expected_grammar = GrammarFor(req.task, req.setting);
  b.shot = req.shot;
  b.exemplar = req.exemplar;

  std::string queries;
  for (const std::string& q : req.queries) {
    if (!queries.empty()) queries += '\n';
    queries += q;
  }
  std::string text = templates.Get(req.task, req.setting, req.shot);
  ReplaceAll(text, "{SETTING_NOTE}", SettingNote(req.setting));
  ReplaceAll(text, "{EXEMPLAR}",
             req.exemplar ? "The previous exchange is a worked example on a "
                            "different spreadsheet. Answer the same way for "
                            "this image.\n"
                          : "");
  ReplaceAll(text, "{ADDRESS_FORM}", AddressFormText(form));
  ReplaceAll(text, "{FORMAT}",
             req.format ? std::string(FormatDescription(*req.format)) : "");
  ReplaceAll(text, "{GRAMMAR}", GrammarText(b.expected_grammar));
  ReplaceAll(text, "{QUERIES}", queries);
  b.user_text = std::move(text);
  return b;
}

}  // namespace sheetvis
