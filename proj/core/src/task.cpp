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

#include "sheetvis/task.hpp"

#include "sheetvis/errors.hpp"

namespace sheetvis {
namespace {

using nlohmann::json;

const json& At(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing required field");
  return *it;
}

std::string Str(const json& j, const char* key, const std::string& path) {
  const json& v = At(j, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

int Int(const json& j, const char* key, const std::string& path) {
  const json& v = At(j, key, path);
  if (!v.is_number_integer()) {
    throw SchemaError(path + "." + key, "expected an integer");
  }
  return v.get<int>();
}

std::vector<std::string> StrList(const json& j, const char* key,
                                 const std::string& path) {
  const json& v = At(j, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      throw SchemaError(path + "." + key + "[" + std::to_string(i) + "]",
                        "expected a string");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

template <typename F>
auto Named(F&& f, const std::string& value, const std::string& path) {
  try {
    return f(value);
  } catch (const ConfigError& e) {
    throw SchemaError(path, e.what());
  }
}

json PromptToJson(const PromptBundle& p) {
  json j = json::object();
  j["system"] = p.system_text;
  j["user"] = p.user_text;
  j["image"] = p.image_ref;
  j["grammar"] = GrammarName(p.expected_grammar);
  j["shot"] = ShotName(p.shot);
  if (p.exemplar) {
    j["exemplar"] = {{"image", p.exemplar->image_ref},
                     {"user", p.exemplar->user_text},
                     {"answer", p.exemplar->answer_text}};
  }
  return j;
}

PromptBundle PromptFromJson(const json& j, const std::string& path) {
  PromptBundle p;
  p.system_text = Str(j, "system", path);
  p.user_text = Str(j, "user", path);
  p.image_ref = Str(j, "image", path);
  p.expected_grammar = Named([](const std::string& s) { return GrammarFromName(s); },
                             Str(j, "grammar", path), path + ".grammar");
  p.shot = Named([](const std::string& s) { return ShotFromName(s); },
                 Str(j, "shot", path), path + ".shot");
  if (j.contains("exemplar")) {
    const std::string ep = path + ".exemplar";
    const json& e = j["exemplar"];
    p.exemplar = Exemplar{Str(e, "image", ep), Str(e, "user", ep),
                          Str(e, "answer", ep)};
  }
  return p;
}

}  // namespace

std::string MakeInstanceId(const std::string& workbook, const std::string& sheet,
                           TaskKind task, std::optional<VisualFormat> format,
                           Setting setting, Shot shot) {
  std::string id = workbook + "__" + sheet + "__" + std::string(TaskName(task));
  if (format) id += "-" + std::string(FormatName(*format));
  id += "__" + std::string(SettingName(setting)) + "__" +
        std::string(ShotName(shot));
  return id;
}

json TaskToJson(const TaskInstance& t) {
  json j = json::object();
  j["id"] = t.id;
  j["workbook"] = t.workbook;
  j["sheet"] = t.sheet;
  j["task"] = TaskName(t.task);
  j["setting"] = SettingName(t.setting);
  j["shot"] = ShotName(t.shot);
  if (t.format) j["format"] = FormatName(*t.format);
  j["image"] = t.image_path;
  j["layout"] = t.layout_path;
  j["sheet_json"] = t.sheet_path;
  j["rows"] = t.sheet_rows;
  j["cols"] = t.sheet_cols;
  j["grammar"] = GrammarName(t.grammar);
  j["address_form"] = AddressFormName(t.form);
  j["prompt"] = PromptToJson(t.prompt);

  json truth;
  switch (t.task) {
    case TaskKind::kOcr:
      truth = json::array();
      for (const OcrCell& c : t.ocr.sequence) {
        truth.push_back({{"r", c.addr.row}, {"c", c.addr.col}, {"t", c.text}});
      }
      break;
    case TaskKind::kSpatial:
      truth = json::array();
      for (const SpatialQuery& q : t.spatial.queries) {
        truth.push_back(
            {{"value", q.value}, {"r", q.answer.row}, {"c", q.answer.col}});
      }
      break;
    case TaskKind::kFormat:
      truth = json::array();
      for (const CellAddress& a : t.format_cells) {
        truth.push_back(json::array({a.row, a.col}));
      }
      break;
    case TaskKind::kTable:
      truth = json::array();
      for (std::size_t i = 0; i < t.tables.ranges.size(); ++i) {
        const BorderContents& b = t.tables.boundaries[i];
        truth.push_back({{"range", RangeToA1(t.tables.ranges[i])},
                         {"top", b.top},
                         {"bottom", b.bottom},
                         {"left", b.left},
                         {"right", b.right}});
      }
      break;
  }
  j["truth"] = std::move(truth);
  return j;
}

TaskInstance TaskFromJson(const json& j) {
  const std::string p = "$";
  TaskInstance t;
  t.id = Str(j, "id", p);
  t.workbook = Str(j, "workbook", p);
  t.sheet = Str(j, "sheet", p);
  t.task = Named([](const std::string& s) { return TaskFromName(s); },
                 Str(j, "task", p), "$.task");
  t.setting = Named([](const std::string& s) { return SettingFromName(s); },
                    Str(j, "setting", p), "$.setting");
  t.shot = Named([](const std::string& s) { return ShotFromName(s); },
                 Str(j, "shot", p), "$.shot");
  if (j.contains("format")) {
    t.format = Named([](const std::string& s) { return FormatFromName(s); },
                     Str(j, "format", p), "$.format");
  }
  t.image_path = Str(j, "image", p);
  t.layout_path = Str(j, "layout", p);
  t.sheet_path = Str(j, "sheet_json", p);
  t.sheet_rows = Int(j, "rows", p);
  t.sheet_cols = Int(j, "cols", p);
  t.grammar = Named([](const std::string& s) { return GrammarFromName(s); },
                    Str(j, "grammar", p), "$.grammar");
  t.form = Named([](const std::string& s) { return AddressFormFromName(s); },
                 Str(j, "address_form", p), "$.address_form");
  t.prompt = PromptFromJson(At(j, "prompt", p), "$.prompt");

  const json& truth = At(j, "truth", p);
  if (!truth.is_array()) throw SchemaError("$.truth", "expected an array");
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::string ip = "$.truth[" + std::to_string(i) + "]";
    const json& e = truth[i];
    switch (t.task) {
      case TaskKind::kOcr:
        t.ocr.sequence.push_back(
            {{Int(e, "r", ip), Int(e, "c", ip)}, Str(e, "t", ip)});
        break;
      case TaskKind::kSpatial:
        t.spatial.queries.push_back(
            {Str(e, "value", ip), {Int(e, "r", ip), Int(e, "c", ip)}});
        break;
      case TaskKind::kFormat:
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer()) {
          throw SchemaError(ip, "expected [row, col]");
        }
        t.format_cells.insert({e[0].get<int>(), e[1].get<int>()});
        break;
      case TaskKind::kTable: {
        try {
          t.tables.ranges.push_back(RangeFromA1(Str(e, "range", ip)));
        } catch (const ParseError& err) {
          throw SchemaError(ip + ".range", err.what());
        }
        t.tables.boundaries.push_back({StrList(e, "top", ip),
                                       StrList(e, "bottom", ip),
                                       StrList(e, "left", ip),
                                       StrList(e, "right", ip)});
        break;
      }
    }
  }
  if (t.task == TaskKind::kSpatial) t.spatial.form = t.form;
  return t;
}

}  // namespace sheetvis
