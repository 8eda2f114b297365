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

// sheetvis: ingest, gen, run, score, demo, gen-corpus, templates.
//
// Exit codes: 0 success, 2 partial failure, 1 fatal or usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sheetvis/errors.hpp"
#include "sheetvis/ingest.hpp"
#include "sheetvis/pipeline.hpp"
#include "sheetvis/synth.hpp"

namespace fs = std::filesystem;

namespace {

using sheetvis::ExitCode;

int Code(ExitCode c) { return static_cast<int>(c); }

struct NoiseFlags {
  double drop = 0;
  double insert = 0;
  int row_offset = 0;
  double corrupt = 0;
  std::uint64_t seed = 0;

  void Add(CLI::App* cmd) {
    cmd->add_option("--noise-drop", drop, "Drop rate in [0,1]");
    cmd->add_option("--noise-insert", insert, "Insert rate in [0,1]");
    cmd->add_option("--noise-row-offset", row_offset, "Row shift for addresses");
    cmd->add_option("--noise-corrupt", corrupt, "Value corruption rate in [0,1]");
    cmd->add_option("--noise-seed", seed, "Noise seed");
  }

  std::optional<sheetvis::NoiseSpec> Spec() const {
    sheetvis::NoiseSpec n{drop, insert, row_offset, corrupt, seed};
    if (n.IsZero()) return std::nullopt;
    return n;
  }
};

template <typename T, typename F>
std::vector<T> Names(const std::vector<std::string>& names, F from_name) {
  std::vector<T> out;
  for (const std::string& n : names) out.push_back(from_name(n));
  return out;
}

void PrintReport(const sheetvis::RunReport& r) {
  std::printf("%-20s %-16s %-5s %-5s %9s %9s %9s %7s\n", "task", "setting",
              "shot", "rep", "precision", "recall", "f1", "rejects");
  for (const sheetvis::ScoreRow& row : r.rows) {
    if (row.repetition != 0) continue;
    std::printf("%-20s %-16s %-5s %-5s %9.4f %9.4f %9.4f %7zu\n",
                row.task.c_str(),
                std::string(sheetvis::SettingName(row.setting)).c_str(),
                std::string(sheetvis::ShotName(row.shot)).c_str(), "mean",
                row.score.precision, row.score.recall, row.score.f1,
                row.rejects);
  }
  if (!r.flagged.empty()) {
    std::printf("%zu flagged instance-repetition pair(s); see report.json\n",
                r.flagged.size());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreadsheet-image benchmark harness"};
  app.set_version_flag("--version", std::string(sheetvis::kVersion));
  app.require_subcommand(1);

  // ingest
  std::vector<std::string> ingest_inputs;
  std::string ingest_out;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "Load xlsx/JSON workbooks, write canonical JSON and a filter report");
  ingest->add_option("inputs", ingest_inputs, "Workbook files or directories");
  ingest->add_option("--out", ingest_out, "Output directory")->required();

  // gen
  std::string gen_corpus, gen_out, gen_templates;
  std::vector<std::string> gen_tasks = {"ocr", "spatial", "format", "table"};
  std::vector<std::string> gen_settings = {"vanilla", "colwidth_adjust",
                                           "style_change", "address_augment"};
  std::vector<std::string> gen_shots = {"zero"};
  std::uint64_t gen_seed = 0;
  std::size_t gen_k = sheetvis::kDefaultSpatialQueries;
  int gen_threads = 0;
  CLI::App* gen = app.add_subcommand("gen", "Render images and write tasks.jsonl");
  gen->add_option("corpus", gen_corpus, "Directory of workbook files")->required();
  gen->add_option("--out", gen_out, "Run directory")->required();
  gen->add_option("--tasks", gen_tasks, "ocr,spatial,format,table")->delimiter(',');
  gen->add_option("--settings", gen_settings,
                  "vanilla,colwidth_adjust,style_change,address_augment")
      ->delimiter(',');
  gen->add_option("--shots", gen_shots, "zero,one")->delimiter(',');
  gen->add_option("--seed", gen_seed, "Sampling seed");
  gen->add_option("--k-spatial", gen_k, "Queries per spatial instance");
  gen->add_option("--templates", gen_templates, "Prompt template directory");
  gen->add_option("--threads", gen_threads, "Worker threads (0: all cores)");

  // run
  std::string run_tasks, run_responses, run_model = "oracle";
  sheetvis::ModelConfig model_cfg;
  int run_reps = 3, run_threads = 0;
  NoiseFlags run_noise;
  CLI::App* run = app.add_subcommand("run", "Answer every instance, write responses.jsonl");
  run->add_option("tasks", run_tasks, "tasks.jsonl")->required();
  run->add_option("--responses", run_responses, "Output path (default: next to tasks)");
  run->add_option("--model", run_model, "oracle or http")
      ->check(CLI::IsMember({"oracle", "http"}));
  run->add_option("--endpoint", model_cfg.endpoint_url, "Chat-completions URL");
  run->add_option("--model-name", model_cfg.model_name, "Model identifier");
  run->add_option("--api-key-env", model_cfg.api_key_env,
                  "Environment variable holding the API key");
  run->add_option("--temperature", model_cfg.temperature);
  run->add_option("--top-p", model_cfg.top_p);
  run->add_option("--max-output-tokens", model_cfg.max_output_tokens);
  run->add_option("--timeout", model_cfg.request_timeout_s, "Seconds per request");
  run->add_option("--max-retries", model_cfg.max_retries);
  run->add_option("--concurrency", model_cfg.max_concurrent_requests);
  run->add_option("--repetitions", run_reps, "Repetitions per instance");
  run->add_option("--threads", run_threads, "Oracle worker threads");
  run_noise.Add(run);

  // score
  std::string score_tasks, score_responses, score_out;
  double score_threshold = 0.8;
  bool score_earlier = false, score_contiguous = false;
  CLI::App* score = app.add_subcommand("score", "Write report.json and report.csv");
  score->add_option("tasks", score_tasks, "tasks.jsonl")->required();
  score->add_option("--responses", score_responses, "responses.jsonl");
  score->add_option("--out", score_out, "Report directory");
  score->add_option("--threshold", score_threshold, "Boundary mapping threshold");
  score->add_flag("--ties-earlier", score_earlier,
                  "Keep the earliest of equally scored boundary lines");
  score->add_flag("--contiguous-lcs", score_contiguous,
                  "Score ocr_lcs with the longest contiguous run");

  // demo
  std::string demo_out = "demo_run";
  std::uint64_t demo_seed = 2024;
  int demo_reps = 3;
  NoiseFlags demo_noise;
  CLI::App* demo = app.add_subcommand(
      "demo", "Synthetic corpus, oracle run and scoring in one step");
  demo->add_option("--out", demo_out, "Output directory");
  demo->add_option("--seed", demo_seed, "Corpus and sampling seed");
  demo->add_option("--repetitions", demo_reps);
  demo_noise.Add(demo);

  // gen-corpus
  std::string corpus_out, corpus_prefix = "synth", corpus_border = "outline";
  int corpus_count = 5;
  std::uint64_t corpus_seed = 0;
  CLI::App* gen_corpus_cmd =
      app.add_subcommand("gen-corpus", "Write synthetic workbooks as JSON");
  gen_corpus_cmd->add_option("--out", corpus_out, "Output directory")->required();
  gen_corpus_cmd->add_option("--count", corpus_count, "Number of workbooks");
  gen_corpus_cmd->add_option("--seed", corpus_seed);
  gen_corpus_cmd->add_option("--prefix", corpus_prefix);
  gen_corpus_cmd->add_option("--border-style", corpus_border, "full, outline or none");

  // templates
  std::string templates_out;
  CLI::App* templates =
      app.add_subcommand("templates", "Write the built-in prompt templates");
  templates->add_option("--out", templates_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : Code(ExitCode::kFatal);
  }

  try {
    if (*ingest) {
      sheetvis::IngestOptions o;
      for (const std::string& s : ingest_inputs) o.inputs.emplace_back(s);
      o.out_dir = ingest_out;
      sheetvis::IngestResult r = sheetvis::CmdIngest(o);
      std::printf("loaded %d, failed %d; report in %s\n", r.loaded, r.failed,
                  (fs::path(ingest_out) / "_ingest_report.json").c_str());
      for (const auto& e : r.report["errors"]) {
        std::fprintf(stderr, "%s: %s\n", e["input"].get<std::string>().c_str(),
                     e["error"].get<std::string>().c_str());
      }
      return Code(r.exit);
    }
    if (*gen) {
      sheetvis::GenOptions o;
      o.corpus = gen_corpus;
      o.out_dir = gen_out;
      o.tasks = Names<sheetvis::TaskKind>(gen_tasks, sheetvis::TaskFromName);
      o.settings = Names<sheetvis::Setting>(gen_settings, sheetvis::SettingFromName);
      o.shots = Names<sheetvis::Shot>(gen_shots, sheetvis::ShotFromName);
      o.seed = gen_seed;
      o.k_spatial = gen_k;
      o.threads = gen_threads;
      if (!gen_templates.empty()) o.templates_dir = gen_templates;
      sheetvis::GenResult r = sheetvis::CmdGen(o);
      std::printf("%zu instances from %zu sheets, %zu skipped\n", r.instances,
                  r.sheets, r.skipped.size());
      return 0;
    }
    if (*run) {
      sheetvis::RunOptions o;
      o.tasks_file = run_tasks;
      o.responses_file = run_responses;
      o.model = run_model;
      o.model_config = model_cfg;
      o.noise = run_noise.Spec();
      o.repetitions = run_reps;
      o.threads = run_threads;
      sheetvis::RunResult r = sheetvis::CmdRun(o);
      std::printf("%zu completed, %zu reused, %zu errors\n", r.completed,
                  r.reused, r.errors);
      return Code(r.exit);
    }
    if (*score) {
      sheetvis::ScoreOptions o;
      o.tasks_file = score_tasks;
      o.responses_file = score_responses;
      o.out_dir = score_out;
      o.mapping.threshold = score_threshold;
      if (score_earlier) o.mapping.tie_break = sheetvis::TieBreak::kEarlier;
      o.contiguous_lcs = score_contiguous;
      PrintReport(sheetvis::CmdScore(o));
      return 0;
    }
    if (*demo) {
      sheetvis::DemoOptions o;
      o.out_dir = demo_out;
      o.seed = demo_seed;
      o.repetitions = demo_reps;
      o.noise = demo_noise.Spec();
      PrintReport(sheetvis::CmdDemo(o));
      std::printf("outputs in %s\n", (fs::path(demo_out) / "run").c_str());
      return 0;
    }
    if (*gen_corpus_cmd) {
      sheetvis::SynthSpec spec;
      spec.seed = corpus_seed;
      spec.border_style = sheetvis::BorderStyleFromName(corpus_border);
      fs::create_directories(corpus_out);
      for (const sheetvis::Workbook& wb :
           sheetvis::GenerateCorpus(spec, corpus_count, corpus_prefix)) {
        sheetvis::SaveJson(wb, fs::path(corpus_out) /
                                   (sheetvis::SanitizeStem(wb.name) + ".json"));
      }
      std::printf("wrote %d workbooks to %s\n", corpus_count, corpus_out.c_str());
      return 0;
    }
    if (*templates) {
      sheetvis::WriteDefaultTemplates(templates_out);
      std::printf("templates written to %s\n", templates_out.c_str());
      return 0;
    }
  } catch (const sheetvis::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return Code(ExitCode::kFatal);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fatal: %s\n", e.what());
    return Code(ExitCode::kFatal);
  }
  return Code(ExitCode::kFatal);
}
