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

#include "sheetvis/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "sheetvis/errors.hpp"
#include "sheetvis/ingest.hpp"
#include "sheetvis/random.hpp"
#include "sheetvis/synth.hpp"
#include "sheetvis/truth.hpp"

namespace sheetvis {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Dump(const json& j, int indent = -1) {
  return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

void WriteFile(const fs::path& p, std::string_view data) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("cannot write " + p.string());
  }
  fs::rename(tmp, p);
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> ReadJsonl(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::vector<json> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (Trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw SchemaError(p.filename().string() + ":" + std::to_string(n),
                        "invalid JSON line");
    }
    out.push_back(std::move(j));
  }
  return out;
}

int ThreadCount(int requested, std::size_t jobs) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n),
                                                std::max<std::size_t>(1, jobs)));
}

// Runs fn(i) for i in [0, n) on `threads` workers. The first exception is
// rethrown after all workers finish.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  int t = ThreadCount(threads, n);
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < t; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

std::string Timestamp() {
  std::time_t tt = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct SheetCheck {
  bool ok = false;
  std::vector<std::string> reasons;
  Sheet transformed;
  LayoutMap layout;
  std::vector<std::uint8_t> png;
};

SheetCheck RenderChecked(const Sheet& s, Setting setting,
                         const RenderConfig& cfg) {
  SheetCheck out;
  out.transformed = ApplySetting(s, setting);
  try {
    out.layout = Layout(out.transformed, cfg);
  } catch (const OversizeError& e) {
    out.reasons.push_back(e.what());
    return out;
  }
  out.png = Rasterize(out.transformed, out.layout, cfg);
  ImageValidation v = ValidateImage(out.png);
  out.ok = v.ok;
  out.reasons = v.failures;
  return out;
}

json RenderConfigJson(const RenderConfig& c) {
  return {{"char_width_px", c.char_width_px},
          {"row_height_px", c.row_height_px},
          {"font_size_px", c.font_size_px},
          {"grid_lines", c.grid_lines},
          {"min_canvas_px", c.min_canvas_px}};
}

std::string ErrorKindName(ClientError::Kind k) {
  switch (k) {
    case ClientError::Kind::kAuth: return "auth";
    case ClientError::Kind::kTimeout: return "timeout";
    case ClientError::Kind::kImageRejected: return "image_rejected";
    case ClientError::Kind::kBadResponse: return "bad_response";
    case ClientError::Kind::kConfig: return "config";
  }
  return "error";
}

json ResponseToJson(const ResponseRecord& r, const std::string& model) {
  json j = {{"id", r.id}, {"repetition", r.repetition}, {"model", model}};
  if (r.text) {
    j["response"] = *r.text;
  } else {
    j["error"] = {{"kind", r.error_kind}, {"message", r.error}};
  }
  return j;
}

// ---- gen ------------------------------------------------------------------

struct SourceSheet {
  std::string workbook;
  NamedSheet sheet;
};

struct Rendered {
  bool ok = false;
  std::string reason;
  Sheet transformed;
  std::string image_rel;
  std::string layout_rel;
  std::string sheet_rel;
};

class Generator {
 public:
  Generator(const GenOptions& opts, std::vector<SourceSheet> sheets)
      : opts_(opts), sheets_(std::move(sheets)) {
    if (opts.templates_dir) {
      templates_ = PromptTemplates::FromDirectory(*opts.templates_dir);
    }
  }

  GenResult Run() {
    RenderAll();
    GenResult result;
    result.sheets = sheets_.size();
    std::string tasks;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < sheets_.size(); ++i) {
      for (Setting setting : opts_.settings) {
        for (TaskKind task : opts_.tasks) {
          std::string where = sheets_[i].workbook + "/" + sheets_[i].sheet.name +
                              " " + std::string(TaskName(task)) + " x " +
                              std::string(SettingName(setting));
          std::string reason;
          if (!IsPermitted(task, setting, &reason)) {
            result.skipped.push_back({where, reason});
            continue;
          }
          std::vector<std::optional<VisualFormat>> formats = {std::nullopt};
          if (task == TaskKind::kFormat) {
            formats.assign(kAllFormats.begin(), kAllFormats.end());
          }
          for (const auto& fmt : formats) {
            for (Shot shot : opts_.shots) {
              std::string label = where;
              if (fmt) label += " [" + std::string(FormatName(*fmt)) + "]";
              label += " " + std::string(ShotName(shot)) + "-shot";
              std::string why;
              std::optional<TaskInstance> inst = Make(i, task, setting, fmt, shot, &why);
              if (!inst) {
                result.skipped.push_back({label, why});
                continue;
              }
              if (!ids.insert(inst->id).second) {
                throw ConfigError("duplicate instance id " + inst->id);
              }
              tasks += Dump(TaskToJson(*inst));
              tasks += '\n';
              ++result.instances;
            }
          }
        }
      }
    }
    WriteFile(opts_.out_dir / "tasks.jsonl", tasks);

    std::string skipped;
    for (const SkipRecord& s : result.skipped) {
      skipped += Dump(json{{"what", s.what}, {"reason", s.reason}});
      skipped += '\n';
    }
    WriteFile(opts_.out_dir / "gen_skipped.jsonl", skipped);

    json tasks_j = json::array(), settings_j = json::array(),
         shots_j = json::array();
    for (TaskKind t : opts_.tasks) tasks_j.push_back(TaskName(t));
    for (Setting s : opts_.settings) settings_j.push_back(SettingName(s));
    for (Shot s : opts_.shots) shots_j.push_back(ShotName(s));
    json meta = {{"version", kVersion},
                 {"seed", opts_.seed},
                 {"k_spatial", opts_.k_spatial},
                 {"tasks", tasks_j},
                 {"settings", settings_j},
                 {"shots", shots_j},
                 {"render", RenderConfigJson(opts_.render)},
                 {"sheets", sheets_.size()},
                 {"instances", result.instances},
                 {"skipped", result.skipped.size()}};
    WriteFile(opts_.out_dir / "gen.json", Dump(meta, 2) + "\n");
    return result;
  }

 private:
  void RenderAll() {
    const std::size_t ns = opts_.settings.size();
    rendered_.assign(sheets_.size() * ns, Rendered{});
    ParallelFor(rendered_.size(), opts_.threads, [&](std::size_t k) {
      const SourceSheet& src = sheets_[k / ns];
      Setting setting = opts_.settings[k % ns];
      Rendered& r = rendered_[k];
      std::string stem = SanitizeStem(src.workbook) + "__" +
                         SanitizeStem(src.sheet.name) + "__" +
                         std::string(SettingName(setting));
      SheetCheck c = RenderChecked(src.sheet.sheet, setting, opts_.render);
      r.transformed = c.transformed;
      if (!c.ok) {
        std::string why;
        for (const std::string& s : c.reasons) {
          why += (why.empty() ? "" : "; ") + s;
        }
        r.reason = "image fails model-input constraints: " + why;
        return;
      }
      r.ok = true;
      r.image_rel = "images/" + stem + ".png";
      r.layout_rel = "images/" + stem + ".layout.json";
      r.sheet_rel = "sheets/" + stem + ".json";
      WriteFile(opts_.out_dir / r.image_rel,
                std::string_view(reinterpret_cast<const char*>(c.png.data()),
                                 c.png.size()));
      WriteFile(opts_.out_dir / r.layout_rel, Dump(c.layout.ToJson()) + "\n");
      NamedSheet named{src.sheet.name, c.transformed, src.sheet.tables};
      WriteFile(opts_.out_dir / r.sheet_rel, Dump(SheetToJson(named)) + "\n");
    });
  }

  const Rendered& RenderedFor(std::size_t i, Setting setting) const {
    auto it = std::find(opts_.settings.begin(), opts_.settings.end(), setting);
    std::size_t s = static_cast<std::size_t>(it - opts_.settings.begin());
    return rendered_[i * opts_.settings.size() + s];
  }

  std::optional<TaskInstance> Zero(std::size_t i, TaskKind task,
                                   Setting setting,
                                   std::optional<VisualFormat> fmt,
                                   std::string* why) {
    auto key = std::make_tuple(i, static_cast<int>(task),
                               static_cast<int>(setting),
                               fmt ? static_cast<int>(*fmt) : -1);
    auto it = zero_cache_.find(key);
    if (it != zero_cache_.end()) {
      if (!it->second.first && why) *why = it->second.second;
      return it->second.first;
    }
    std::string reason;
    std::optional<TaskInstance> inst = BuildZero(i, task, setting, fmt, &reason);
    zero_cache_[key] = {inst, reason};
    if (!inst && why) *why = reason;
    return inst;
  }

  std::optional<TaskInstance> BuildZero(std::size_t i, TaskKind task,
                                        Setting setting,
                                        std::optional<VisualFormat> fmt,
                                        std::string* why) {
    const SourceSheet& src = sheets_[i];
    const Rendered& r = RenderedFor(i, setting);
    if (!r.ok) {
      *why = r.reason;
      return std::nullopt;
    }
    TaskInstance t;
    t.workbook = src.workbook;
    t.sheet = src.sheet.name;
    t.task = task;
    t.setting = setting;
    t.shot = Shot::kZero;
    t.format = fmt;
    t.id = MakeInstanceId(t.workbook, t.sheet, task, fmt, setting, Shot::kZero);
    t.image_path = r.image_rel;
    t.layout_path = r.layout_rel;
    t.sheet_path = r.sheet_rel;
    t.sheet_rows = r.transformed.rows();
    t.sheet_cols = r.transformed.cols();
    t.grammar = GrammarFor(task, setting);
    t.form = AddressFormFor(setting);

    PromptRequest req;
    req.task = task;
    req.setting = setting;
    req.shot = Shot::kZero;
    req.image_ref = t.image_path;
    req.format = fmt;

    switch (task) {
      case TaskKind::kOcr:
        t.ocr = ExtractOcr(r.transformed);
        break;
      case TaskKind::kSpatial: {
        std::size_t available = UniqueValueCells(r.transformed).size();
        if (available == 0) {
          *why = "sheet has no unique-valued cells";
          return std::nullopt;
        }
        std::uint64_t seed = MixSeed(
            opts_.seed, StableHash(t.workbook + "\x1f" + t.sheet + "\x1f" +
                                   std::string(SettingName(setting))));
        t.spatial = ExtractSpatial(r.transformed,
                                   std::min(opts_.k_spatial, available), seed,
                                   t.form);
        for (const SpatialQuery& q : t.spatial.queries) {
          req.queries.push_back(q.value);
        }
        break;
      }
      case TaskKind::kFormat:
        t.format_cells = ExtractFormats(r.transformed).of(*fmt);
        break;
      case TaskKind::kTable:
        if (src.sheet.tables.empty()) {
          *why = "sheet has no table annotations";
          return std::nullopt;
        }
        try {
          t.tables = ExtractTableBoundaries(r.transformed, src.sheet.tables);
        } catch (const BoundsError& e) {
          *why = e.what();
          return std::nullopt;
        }
        break;
    }
    t.prompt = BuildPrompt(req, templates_);
    return t;
  }

  std::optional<TaskInstance> Make(std::size_t i, TaskKind task,
                                   Setting setting,
                                   std::optional<VisualFormat> fmt, Shot shot,
                                   std::string* why) {
    std::optional<TaskInstance> zero = Zero(i, task, setting, fmt, why);
    if (!zero || shot == Shot::kZero) return zero;

    std::optional<Exemplar> ex;
    for (std::size_t d = 1; d < sheets_.size() && !ex; ++d) {
      std::size_t j = (i + d) % sheets_.size();
      std::optional<TaskInstance> other = Zero(j, task, setting, fmt, nullptr);
      if (other) {
        ex = Exemplar{other->image_path, other->prompt.user_text,
                      OracleAnswer(*other)};
      }
    }
    if (!ex) {
      *why = "no other sheet can supply a one-shot exemplar";
      return std::nullopt;
    }
    TaskInstance t = *zero;
    t.shot = Shot::kOne;
    t.id = MakeInstanceId(t.workbook, t.sheet, task, fmt, setting, Shot::kOne);
    PromptRequest req;
    req.task = task;
    req.setting = setting;
    req.shot = Shot::kOne;
    req.image_ref = t.image_path;
    req.format = fmt;
    for (const SpatialQuery& q : t.spatial.queries) req.queries.push_back(q.value);
    req.exemplar = ex;
    t.prompt = BuildPrompt(req, templates_);
    return t;
  }

  const GenOptions& opts_;
  std::vector<SourceSheet> sheets_;
  PromptTemplates templates_;
  std::vector<Rendered> rendered_;
  std::map<std::tuple<std::size_t, int, int, int>,
           std::pair<std::optional<TaskInstance>, std::string>>
      zero_cache_;
};

// ---- score ----------------------------------------------------------------

const std::vector<std::string>& GroupOrder() {
  static const std::vector<std::string> kOrder = [] {
    std::vector<std::string> v = {"ocr_strict", "ocr_lcs", "spatial", "format",
                                  "table"};
    for (VisualFormat f : kAllFormats) {
      v.push_back("format_" + std::string(FormatName(f)));
    }
    return v;
  }();
  return kOrder;
}

int GroupIndex(const std::string& g) {
  const auto& order = GroupOrder();
  return static_cast<int>(std::find(order.begin(), order.end(), g) -
                          order.begin());
}

struct InstanceScore {
  std::vector<std::pair<std::string, PRFScore>> groups;
  std::size_t rejects = 0;
  std::size_t unmappable = 0;
  std::size_t capped = 0;
  bool missing = false;
  bool error = false;
  std::string flag;
};

InstanceScore ScoreOne(const TaskInstance& t, const ResponseRecord* r,
                       const SheetLines* lines, const ScoreOptions& opts) {
  InstanceScore s;
  std::string raw;
  if (!r) {
    s.missing = true;
    s.flag = "missing response";
  } else if (!r->text) {
    s.error = true;
    s.flag = "error response (" + r->error_kind + "): " + r->error;
  } else {
    raw = *r->text;
  }

  ParsedPrediction p;
  p.grammar = t.grammar;
  try {
    p = Parse(raw, t.grammar, t.form);
  } catch (const TableParseError& e) {
    s.rejects = 1;
    if (s.flag.empty()) s.flag = std::string("unparseable answer: ") + e.what();
  }
  s.rejects += p.rejects.size();
  s.capped = p.capped_regions;

  switch (t.task) {
    case TaskKind::kOcr:
      s.groups.push_back({"ocr_strict", ScoreOcrStrict(p.ocr, t.ocr)});
      s.groups.push_back(
          {"ocr_lcs", opts.contiguous_lcs ? ScoreOcrContiguous(p.ocr, t.ocr)
                                          : ScoreOcrLcs(p.ocr, t.ocr)});
      break;
    case TaskKind::kSpatial:
      s.groups.push_back({"spatial", ScorePairs(p.pairs, t.spatial)});
      break;
    case TaskKind::kFormat: {
      PRFScore f = ScoreAddressSet(p.addresses, t.format_cells);
      s.groups.push_back({"format", f});
      s.groups.push_back({"format_" + std::string(FormatName(*t.format)), f});
      break;
    }
    case TaskKind::kTable: {
      std::vector<TableRange> ranges = p.ranges;
      if (t.grammar == Grammar::kFourBoundariesJson) {
        for (const BorderPrediction& b : p.tables) {
          try {
            ranges.push_back(BoundariesToRange(b, *lines, opts.mapping));
          } catch (const UnmappableTableError&) {
            ++s.unmappable;
          }
        }
      }
      s.groups.push_back({"table", ScoreTableDetection(ranges, t.tables.ranges,
                                                       s.unmappable)});
      break;
    }
  }
  return s;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string SanitizeStem(std::string_view s) {
  std::string out;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

std::vector<fs::path> ListWorkbookFiles(const fs::path& path) {
  auto wanted = [](const fs::path& p) {
    std::string name = p.filename().string();
    if (name.empty() || name[0] == '_') return false;
    if (name.size() > 12 && name.ends_with(".tables.json")) return false;
    std::string ext = p.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".xlsx" || ext == ".xlsm" || ext == ".json";
  };
  std::vector<fs::path> out;
  if (fs::is_regular_file(path)) {
    out.push_back(path);
    return out;
  }
  if (!fs::is_directory(path)) {
    throw ConfigError("no such file or directory: " + path.string());
  }
  for (const fs::directory_entry& e : fs::directory_iterator(path)) {
    if (e.is_regular_file() && wanted(e.path())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

IngestResult CmdIngest(const IngestOptions& opts) {
  if (opts.inputs.empty()) throw ConfigError("no input files given");
  opts.render.Validate();
  std::vector<fs::path> files;
  for (const fs::path& in : opts.inputs) {
    std::vector<fs::path> found = ListWorkbookFiles(in);
    files.insert(files.end(), found.begin(), found.end());
  }
  if (files.empty()) throw ConfigError("no workbook files found in the inputs");
  fs::create_directories(opts.out_dir);

  IngestResult res;
  json file_reports = json::array();
  json errors = json::array();
  std::map<std::string, int> pass_counts;
  for (Setting s : kAllSettings) pass_counts[std::string(SettingName(s))] = 0;
  std::set<std::string> stems;
  int sheet_total = 0;

  for (const fs::path& f : files) {
    try {
      Workbook wb = LoadWorkbook(f);
      std::string stem = SanitizeStem(wb.name);
      for (int n = 2; !stems.insert(stem).second; ++n) {
        stem = SanitizeStem(wb.name) + "_" + std::to_string(n);
      }
      fs::path out = opts.out_dir / (stem + ".json");
      SaveJson(wb, out);
      json sheets = json::array();
      for (const NamedSheet& ns : wb.sheets) {
        ++sheet_total;
        json per_setting = json::object();
        for (Setting setting : kAllSettings) {
          SheetCheck c = RenderChecked(ns.sheet, setting, opts.render);
          per_setting[std::string(SettingName(setting))] = {
              {"pass", c.ok}, {"reasons", c.reasons}};
          if (c.ok) ++pass_counts[std::string(SettingName(setting))];
        }
        sheets.push_back({{"name", ns.name},
                          {"rows", ns.sheet.rows()},
                          {"cols", ns.sheet.cols()},
                          {"tables", ns.tables.size()},
                          {"settings", per_setting}});
      }
      file_reports.push_back({{"input", f.filename().string()},
                              {"workbook", wb.name},
                              {"output", out.filename().string()},
                              {"sheets", sheets},
                              {"warnings", wb.warnings}});
      ++res.loaded;
    } catch (const Error& e) {
      ++res.failed;
      errors.push_back({{"input", f.filename().string()}, {"error", e.what()}});
    }
  }
  res.report = {{"version", kVersion},
                {"files", file_reports},
                {"errors", errors},
                {"sheet_count", sheet_total},
                {"pass_counts", pass_counts}};
  WriteFile(opts.out_dir / "_ingest_report.json", Dump(res.report, 2) + "\n");
  if (res.loaded == 0) {
    res.exit = ExitCode::kFatal;
  } else if (res.failed > 0) {
    res.exit = ExitCode::kPartial;
  }
  return res;
}

GenResult CmdGen(const GenOptions& opts) {
  opts.render.Validate();
  if (opts.tasks.empty() || opts.settings.empty() || opts.shots.empty()) {
    throw ConfigError("tasks, settings and shots must be non-empty");
  }
  std::vector<fs::path> files = ListWorkbookFiles(opts.corpus);
  if (files.empty()) {
    throw ConfigError("no workbooks found in " + opts.corpus.string());
  }
  std::vector<SourceSheet> sheets;
  std::set<std::string> names;
  for (const fs::path& f : files) {
    Workbook wb = LoadWorkbook(f);
    CheckUniqueSheetNames(wb);
    if (!names.insert(SanitizeStem(wb.name)).second) {
      throw ConfigError("two workbooks map to the name " + SanitizeStem(wb.name));
    }
    for (NamedSheet& ns : wb.sheets) sheets.push_back({wb.name, std::move(ns)});
  }
  fs::create_directories(opts.out_dir);
  Generator gen(opts, std::move(sheets));
  return gen.Run();
}

std::vector<TaskInstance> LoadTasks(const fs::path& tasks_jsonl) {
  std::vector<TaskInstance> out;
  std::set<std::string> ids;
  for (const json& j : ReadJsonl(tasks_jsonl)) {
    out.push_back(TaskFromJson(j));
    if (!ids.insert(out.back().id).second) {
      throw SchemaError(tasks_jsonl.filename().string(),
                        "duplicate instance id " + out.back().id);
    }
  }
  return out;
}

std::vector<ResponseRecord> LoadResponses(const fs::path& path) {
  std::vector<ResponseRecord> out;
  for (const json& j : ReadJsonl(path)) {
    ResponseRecord r;
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      throw SchemaError(path.filename().string(), "response without an id");
    }
    r.id = j["id"].get<std::string>();
    r.repetition = j.value("repetition", 1);
    if (j.contains("response") && j["response"].is_string()) {
      r.text = j["response"].get<std::string>();
    } else if (j.contains("error") && j["error"].is_object()) {
      r.error_kind = j["error"].value("kind", "error");
      r.error = j["error"].value("message", "");
    } else {
      r.error_kind = "malformed";
      r.error = "record has neither response nor error";
    }
    out.push_back(std::move(r));
  }
  return out;
}

RunResult CmdRun(const RunOptions& opts) {
  if (opts.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (opts.model != "oracle" && opts.model != "http") {
    throw ConfigError("model must be \"oracle\" or \"http\"");
  }
  if (opts.noise) {
    opts.noise->Validate();
    if (opts.model != "oracle") {
      throw ConfigError("noise injection applies to the oracle model only");
    }
  }
  if (opts.model == "http") opts.model_config.Validate();

  const fs::path base = opts.tasks_file.parent_path();
  const fs::path responses_path = opts.responses_file.empty()
                                      ? base / "responses.jsonl"
                                      : opts.responses_file;
  std::vector<TaskInstance> tasks = LoadTasks(opts.tasks_file);

  std::map<std::pair<std::string, int>, ResponseRecord> done;
  if (fs::exists(responses_path)) {
    for (ResponseRecord& r : LoadResponses(responses_path)) {
      if (r.text) done[{r.id, r.repetition}] = std::move(r);
    }
  }

  struct Job {
    std::size_t task;
    int rep;
  };
  std::vector<Job> jobs;
  RunResult result;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (int rep = 1; rep <= opts.repetitions; ++rep) {
      if (done.count({tasks[i].id, rep})) {
        ++result.reused;
      } else {
        jobs.push_back({i, rep});
      }
    }
  }

  const std::string model_label =
      opts.model == "http" ? "http:" + opts.model_config.model_name : "oracle";
  AuditLog audit(base / "audit.jsonl");
  std::optional<HttpModelClient> client;
  if (opts.model == "http") client.emplace(opts.model_config, &audit);

  std::vector<ResponseRecord> fresh(jobs.size());
  int threads = opts.model == "http" ? opts.model_config.max_concurrent_requests
                                     : opts.threads;
  ParallelFor(jobs.size(), threads, [&](std::size_t k) {
    const TaskInstance& t = tasks[jobs[k].task];
    ResponseRecord& r = fresh[k];
    r.id = t.id;
    r.repetition = jobs[k].rep;
    if (client) {
      try {
        r.text = client->Send(t.prompt, t.id, base, r.repetition).text;
      } catch (const ClientError& e) {
        r.error_kind = ErrorKindName(e.kind());
        r.error = e.what();
      }
      return;
    }
    try {
      std::string answer = OracleAnswer(t);
      if (opts.noise) {
        NoiseSpec spec = *opts.noise;
        spec.seed = MixSeed(spec.seed, static_cast<std::uint64_t>(r.repetition));
        answer = Perturb(answer, t, spec);
      }
      r.text = std::move(answer);
    } catch (const Error& e) {
      r.error_kind = "noise";
      r.error = e.what();
    }
    audit.Write({{"instance_id", t.id},
                 {"repetition", r.repetition},
                 {"timestamp", Timestamp()},
                 {"latency_s", 0.0},
                 {"attempts", 1},
                 {"model", model_label},
                 {"response", r.text ? json(*r.text) : json()},
                 {"error", r.text ? json() : json(r.error)}});
  });

  for (ResponseRecord& r : fresh) {
    if (r.text) {
      ++result.completed;
    } else {
      ++result.errors;
    }
    done[{r.id, r.repetition}] = std::move(r);
  }
  std::string out;
  for (const TaskInstance& t : tasks) {
    for (int rep = 1; rep <= opts.repetitions; ++rep) {
      auto it = done.find({t.id, rep});
      if (it == done.end()) continue;
      out += Dump(ResponseToJson(it->second, model_label));
      out += '\n';
    }
  }
  WriteFile(responses_path, out);

  json meta = {{"version", kVersion},
               {"model", model_label},
               {"repetitions", opts.repetitions},
               {"noise", opts.noise ? opts.noise->ToJson() : json()}};
  if (opts.model == "http") {
    meta["model_config"] = opts.model_config.ToJson();
    meta["model_config_hash"] = opts.model_config.Hash();
  } else {
    meta["model_config_hash"] = Sha256Hex(Dump(json{{"model", "oracle"}}));
  }
  WriteFile(base / "run.json", Dump(meta, 2) + "\n");

  if (result.errors > 0) {
    result.exit = result.errors == jobs.size() && result.reused == 0
                      ? ExitCode::kFatal
                      : ExitCode::kPartial;
  }
  return result;
}

json RunReport::ToJson() const {
  json rows_j = json::array();
  for (const ScoreRow& r : rows) {
    json j = {{"task", r.task},
              {"setting", SettingName(r.setting)},
              {"shot", ShotName(r.shot)},
              {"repetition", r.repetition == 0 ? json("mean") : json(r.repetition)},
              {"precision", r.score.precision},
              {"recall", r.score.recall},
              {"f1", r.score.f1},
              {"instances", r.instances},
              {"rejects", r.rejects},
              {"unmappable", r.unmappable},
              {"missing", r.missing},
              {"errors", r.errors}};
    if (r.repetition != 0) {
      j["predicted"] = r.score.predicted;
      j["truth"] = r.score.truth;
      j["matched"] = r.score.matched;
    }
    rows_j.push_back(std::move(j));
  }
  return {{"meta", meta},
          {"notes", notes},
          {"accounted", accounted},
          {"flagged", flagged},
          {"rows", rows_j}};
}

std::string RunReport::ToCsv() const {
  std::string out = "task,setting,shot,repetition,precision,recall,f1,rejects\n";
  for (const ScoreRow& r : rows) {
    out += r.task + "," + std::string(SettingName(r.setting)) + "," +
           std::string(ShotName(r.shot)) + "," +
           (r.repetition == 0 ? std::string("mean")
                              : std::to_string(r.repetition)) +
           "," + Fixed(r.score.precision) + "," + Fixed(r.score.recall) + "," +
           Fixed(r.score.f1) + "," + std::to_string(r.rejects) + "\n";
  }
  return out;
}

RunReport CmdScore(const ScoreOptions& opts) {
  const fs::path base = opts.tasks_file.parent_path();
  const fs::path responses_path = opts.responses_file.empty()
                                      ? base / "responses.jsonl"
                                      : opts.responses_file;
  const fs::path out_dir = opts.out_dir.empty() ? base : opts.out_dir;
  std::vector<TaskInstance> tasks = LoadTasks(opts.tasks_file);
  std::vector<ResponseRecord> responses = LoadResponses(responses_path);

  json gen_meta, run_meta;
  if (fs::exists(base / "gen.json")) gen_meta = json::parse(ReadFile(base / "gen.json"));
  if (fs::exists(base / "run.json")) run_meta = json::parse(ReadFile(base / "run.json"));

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tasks.size(); ++i) index[tasks[i].id] = i;
  int reps = run_meta.is_object() ? run_meta.value("repetitions", 1) : 1;
  std::map<std::pair<std::string, int>, const ResponseRecord*> by_key;
  for (const ResponseRecord& r : responses) {
    if (!index.count(r.id)) {
      throw ScoringError("response for unknown instance \"" + r.id + "\"");
    }
    if (r.repetition < 1) {
      throw ScoringError("response for \"" + r.id + "\" has repetition " +
                         std::to_string(r.repetition));
    }
    reps = std::max(reps, r.repetition);
    by_key[{r.id, r.repetition}] = &r;
  }

  std::map<std::string, SheetLines> lines;
  for (const TaskInstance& t : tasks) {
    if (t.task != TaskKind::kTable || lines.count(t.sheet_path)) continue;
    NamedSheet ns =
        SheetFromJson(json::parse(ReadFile(base / t.sheet_path)), "$");
    lines.emplace(t.sheet_path, SheetLines(ns.sheet));
  }

  std::vector<InstanceScore> scores(tasks.size() * static_cast<std::size_t>(reps));
  ParallelFor(scores.size(), 0, [&](std::size_t k) {
    const TaskInstance& t = tasks[k / static_cast<std::size_t>(reps)];
    int rep = static_cast<int>(k % static_cast<std::size_t>(reps)) + 1;
    auto it = by_key.find({t.id, rep});
    const SheetLines* sl = nullptr;
    if (t.task == TaskKind::kTable) sl = &lines.at(t.sheet_path);
    scores[k] = ScoreOne(t, it == by_key.end() ? nullptr : it->second, sl, opts);
  });

  struct Acc {
    std::vector<PRFScore> parts;
    std::size_t rejects = 0, unmappable = 0, missing = 0, errors = 0;
  };
  using Key = std::tuple<int, int, int, int>;  // group, setting, shot, rep
  std::map<Key, Acc> acc;
  RunReport report;
  std::size_t capped = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const TaskInstance& t = tasks[k / static_cast<std::size_t>(reps)];
    int rep = static_cast<int>(k % static_cast<std::size_t>(reps)) + 1;
    const InstanceScore& s = scores[k];
    ++report.accounted;
    capped += s.capped;
    if (!s.flag.empty()) {
      report.flagged.push_back(t.id + "#" + std::to_string(rep) + ": " + s.flag);
    }
    for (const auto& [group, prf] : s.groups) {
      Acc& a = acc[{GroupIndex(group), static_cast<int>(t.setting),
                    static_cast<int>(t.shot), rep}];
      a.parts.push_back(prf);
      a.rejects += s.rejects;
      a.unmappable += s.unmappable;
      a.missing += s.missing ? 1 : 0;
      a.errors += s.error ? 1 : 0;
    }
  }

  const auto& order = GroupOrder();
  std::map<std::tuple<int, int, int>, std::vector<ScoreRow>> per_config;
  for (const auto& [key, a] : acc) {
    auto [g, setting, shot, rep] = key;
    ScoreRow row;
    row.task = order[static_cast<std::size_t>(g)];
    row.setting = static_cast<Setting>(setting);
    row.shot = static_cast<Shot>(shot);
    row.repetition = rep;
    row.score = Pool(a.parts);
    row.instances = a.parts.size();
    row.rejects = a.rejects;
    row.unmappable = a.unmappable;
    row.missing = a.missing;
    row.errors = a.errors;
    per_config[{g, setting, shot}].push_back(row);
  }
  for (auto& [cfg, rows] : per_config) {
    ScoreRow mean = rows.front();
    mean.repetition = 0;
    mean.score = PRFScore{};
    mean.rejects = mean.unmappable = mean.missing = mean.errors = 0;
    for (const ScoreRow& r : rows) {
      mean.score.precision += r.score.precision;
      mean.score.recall += r.score.recall;
      mean.score.f1 += r.score.f1;
      mean.score.predicted += r.score.predicted;
      mean.score.truth += r.score.truth;
      mean.score.matched += r.score.matched;
      mean.rejects += r.rejects;
      mean.unmappable += r.unmappable;
      mean.missing += r.missing;
      mean.errors += r.errors;
      report.rows.push_back(r);
    }
    double n = static_cast<double>(rows.size());
    mean.score.precision /= n;
    mean.score.recall /= n;
    mean.score.f1 /= n;
    report.rows.push_back(mean);
  }

  report.meta = {{"version", kVersion},
                 {"instances", tasks.size()},
                 {"repetitions", reps},
                 {"responses", responses.size()}};
  if (gen_meta.is_object()) {
    report.meta["seed"] = gen_meta.value("seed", json());
    report.meta["k_spatial"] = gen_meta.value("k_spatial", json());
    report.meta["render"] = gen_meta.value("render", json());
  }
  if (run_meta.is_object()) {
    report.meta["model"] = run_meta.value("model", json());
    report.meta["model_config_hash"] = run_meta.value("model_config_hash", json());
    report.meta["noise"] = run_meta.value("noise", json());
  }
  report.meta["mapping"] = {
      {"threshold", opts.mapping.threshold},
      {"tie_break",
       opts.mapping.tie_break == TieBreak::kLater ? "later" : "earlier"}};
  report.meta["ocr_lcs_mode"] = opts.contiguous_lcs ? "contiguous" : "subsequence";

  report.notes.push_back(
      "address_augment: column widths are fitted after address tagging, with "
      "the 15-character cap extended by each tag's length");
  report.notes.push_back(
      "scores pool counts over all instances of a (task, setting, shot, "
      "repetition); mean rows average precision, recall and F1 over "
      "repetitions");
  report.notes.push_back(
      "table: exact range match; predicted tables whose boundaries cannot be "
      "mapped count as false positives");
  if (capped > 0) {
    report.notes.push_back(std::to_string(capped) +
                           " region token(s) larger than " +
                           std::to_string(kMaxRegionCells) +
                           " cells were rejected");
  }
  if (!report.flagged.empty()) {
    report.notes.push_back(std::to_string(report.flagged.size()) +
                           " instance-repetition pair(s) flagged; missing and "
                           "error responses are scored as empty predictions");
  }

  fs::create_directories(out_dir);
  WriteFile(out_dir / "report.json", Dump(report.ToJson(), 2) + "\n");
  WriteFile(out_dir / "report.csv", report.ToCsv());
  return report;
}

RunReport CmdDemo(const DemoOptions& opts) {
  const fs::path corpus = opts.out_dir / "corpus";
  fs::create_directories(corpus);
  for (const Workbook& wb : DemoCorpus(opts.seed)) {
    SaveJson(wb, corpus / (SanitizeStem(wb.name) + ".json"));
  }
  const fs::path run_dir = opts.out_dir / "run";
  GenOptions gen;
  gen.corpus = corpus;
  gen.out_dir = run_dir;
  gen.shots = {Shot::kZero, Shot::kOne};
  gen.seed = opts.seed;
  CmdGen(gen);

  RunOptions run;
  run.tasks_file = run_dir / "tasks.jsonl";
  run.repetitions = opts.repetitions;
  run.noise = opts.noise;
  if (fs::exists(run_dir / "responses.jsonl")) fs::remove(run_dir / "responses.jsonl");
  CmdRun(run);

  ScoreOptions score;
  score.tasks_file = run.tasks_file;
  return CmdScore(score);
}

}  // namespace sheetvis
