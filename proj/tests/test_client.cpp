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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <memory>
#include <set>
#include <thread>

#include "sheetvis/client.hpp"
#include "sheetvis/errors.hpp"
#include "sheetvis/parsing.hpp"
#include "sheetvis/render.hpp"
#include "sheetvis/truth.hpp"
#include "test_util.hpp"

namespace sheetvis {
namespace {

using testing::ReadAll;
using testing::TempDir;
using testing::WriteAll;

Sheet PeopleSheet() {
  Sheet s(30, 4);
  for (int r = 1; r <= 30; ++r) s.at(r, 1).text = "row " + std::to_string(r);
  s.at(26, 2).text = "Other People";
  s.at(2, 3).text = "alpha";
  s.at(2, 4).text = "beta";
  s.at(3, 3).text = "gamma";
  s.at(3, 4).text = "delta";
  s.at(2, 3).format.bold = true;
  s.at(2, 4).format.bold = true;
  s.at(5, 2).format.bold = true;
  return s;
}

TaskInstance Instance(TaskKind task, Setting setting) {
  Sheet s = PeopleSheet();
  TaskInstance t;
  t.workbook = "wb";
  t.sheet = "S";
  t.task = task;
  t.setting = setting;
  t.id = MakeInstanceId("wb", "S", task, std::nullopt, setting, Shot::kZero);
  t.grammar = GrammarFor(task, setting);
  t.form = AddressFormFor(setting);
  t.sheet_rows = s.rows();
  t.sheet_cols = s.cols();
  switch (task) {
    case TaskKind::kOcr:
      t.ocr = ExtractOcr(s);
      break;
    case TaskKind::kSpatial:
      t.spatial = ExtractSpatial(s, UniqueValueCells(s).size(), 7, t.form);
      break;
    case TaskKind::kFormat:
      t.format = VisualFormat::kBold;
      t.format_cells = ExtractFormats(s).of(VisualFormat::kBold);
      break;
    case TaskKind::kTable:
      t.tables = ExtractTableBoundaries(s, {RangeFromA1("C2:D3")});
      break;
  }
  return t;
}

std::vector<TaskInstance> AllInstances() {
  std::vector<TaskInstance> out;
  for (TaskKind task : kAllTasks) {
    for (Setting s : {Setting::kVanilla, Setting::kAddressAugment}) {
      out.push_back(Instance(task, s));
    }
  }
  return out;
}

TEST(OracleTest, AnswersParseBackToTruth) {
  for (const TaskInstance& t : AllInstances()) {
    std::string answer = OracleAnswer(t);
    ParsedPrediction p = Parse(answer, t.grammar, t.form);
    EXPECT_TRUE(p.rejects.empty()) << t.id;
    switch (t.task) {
      case TaskKind::kOcr:
        EXPECT_EQ(p.ocr, t.ocr.Texts());
        break;
      case TaskKind::kSpatial:
        EXPECT_EQ(p.pairs.size(), t.spatial.queries.size());
        break;
      case TaskKind::kFormat:
        EXPECT_EQ(p.addresses, t.format_cells);
        break;
      case TaskKind::kTable:
        if (t.grammar == Grammar::kRangeLines) {
          EXPECT_EQ(p.ranges, t.tables.ranges);
        } else {
          ASSERT_EQ(p.tables.size(), 1u);
          EXPECT_EQ(p.tables[0], ToPrediction(t.tables.boundaries[0]));
        }
        break;
    }
  }
}

TEST(OracleTest, SpatialAnswerForms) {
  std::string rc = OracleAnswer(Instance(TaskKind::kSpatial, Setting::kVanilla));
  EXPECT_NE(rc.find("Other People => 26,2"), std::string::npos);
  std::string a1 =
      OracleAnswer(Instance(TaskKind::kSpatial, Setting::kAddressAugment));
  EXPECT_NE(a1.find("Other People => B26"), std::string::npos);
}

std::size_t ItemCount(const ParsedPrediction& p) {
  return p.ocr.size() + p.pairs.size() + p.addresses.size() + p.tables.size() +
         p.ranges.size();
}

TEST(PerturbTest, ZeroNoiseIsIdentity) {
  for (const TaskInstance& t : AllInstances()) {
    std::string a = OracleAnswer(t);
    std::string b = Perturb(a, t, NoiseSpec{});
    ParsedPrediction pa = Parse(a, t.grammar, t.form);
    ParsedPrediction pb = Parse(b, t.grammar, t.form);
    EXPECT_EQ(pa.ocr, pb.ocr);
    EXPECT_EQ(pa.pairs, pb.pairs);
    EXPECT_EQ(pa.addresses, pb.addresses);
    EXPECT_EQ(pa.tables, pb.tables);
    EXPECT_EQ(pa.ranges, pb.ranges);
  }
}

TEST(PerturbTest, DropAllEmptiesEveryAnswer) {
  NoiseSpec spec;
  spec.drop_rate = 1;
  for (const TaskInstance& t : AllInstances()) {
    std::string out = Perturb(OracleAnswer(t), t, spec);
    EXPECT_EQ(ItemCount(Parse(out, t.grammar, t.form)), 0u) << t.id;
  }
}

TEST(PerturbTest, RowOffsetMovesEveryAddress) {
  NoiseSpec spec;
  spec.row_offset = 1;
  for (Setting s : {Setting::kVanilla, Setting::kAddressAugment}) {
    TaskInstance t = Instance(TaskKind::kSpatial, s);
    ParsedPrediction p =
        Parse(Perturb(OracleAnswer(t), t, spec), t.grammar, t.form);
    ASSERT_EQ(p.pairs.size(), t.spatial.queries.size());
    for (const SpatialQuery& q : t.spatial.queries) {
      auto it = std::find_if(p.pairs.begin(), p.pairs.end(),
                             [&](const SpatialPair& sp) { return sp.value == q.value; });
      ASSERT_NE(it, p.pairs.end());
      EXPECT_EQ(it->addr, (CellAddress{q.answer.row + 1, q.answer.col}));
    }
    TaskInstance f = Instance(TaskKind::kFormat, s);
    AddressSet moved =
        Parse(Perturb(OracleAnswer(f), f, spec), f.grammar, f.form).addresses;
    AddressSet expected;
    for (CellAddress a : f.format_cells) expected.insert({a.row + 1, a.col});
    EXPECT_EQ(moved, expected);
  }
}

TEST(PerturbTest, CorruptionNeverYieldsTruthValues) {
  NoiseSpec spec;
  spec.value_corrupt_rate = 1;
  TaskInstance t = Instance(TaskKind::kOcr, Setting::kVanilla);
  std::vector<std::string> truth = t.ocr.Texts();
  std::set<std::string> truth_set(truth.begin(), truth.end());
  std::vector<std::string> out =
      Parse(Perturb(OracleAnswer(t), t, spec), t.grammar, t.form).ocr;
  ASSERT_EQ(out.size(), truth.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(truth_set.count(out[i]), 0u) << out[i];
    EXPECT_EQ(out[i].size(), truth[i].size());
  }
}

TEST(PerturbTest, InsertAddsItemsAndIsDeterministic) {
  NoiseSpec spec;
  spec.insert_rate = 1;
  spec.seed = 11;
  TaskInstance t = Instance(TaskKind::kOcr, Setting::kVanilla);
  std::string a = Perturb(OracleAnswer(t), t, spec);
  EXPECT_EQ(a, Perturb(OracleAnswer(t), t, spec));
  EXPECT_EQ(Parse(a, t.grammar, t.form).ocr.size(), 2 * t.ocr.sequence.size());
  spec.seed = 12;
  EXPECT_NE(a, Perturb(OracleAnswer(t), t, spec));
}

TEST(PerturbTest, Errors) {
  TaskInstance t = Instance(TaskKind::kTable, Setting::kVanilla);
  EXPECT_THROW(Perturb("not json at all", t, NoiseSpec{}), NoiseError);
  TaskInstance s = Instance(TaskKind::kSpatial, Setting::kVanilla);
  EXPECT_THROW(Perturb("value without address", s, NoiseSpec{}), NoiseError);
  NoiseSpec bad;
  bad.drop_rate = 1.5;
  EXPECT_THROW(Perturb("", s, bad), ConfigError);
}

TEST(UtilTest, Base64) {
  EXPECT_EQ(Base64Encode(""), "");
  EXPECT_EQ(Base64Encode("f"), "Zg==");
  EXPECT_EQ(Base64Encode("fo"), "Zm8=");
  EXPECT_EQ(Base64Encode("foo"), "Zm9v");
  EXPECT_EQ(Base64Encode("foobar"), "Zm9vYmFy");
}

TEST(UtilTest, Sha256) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(UtilTest, ModelConfigHashExcludesSecrets) {
  ModelConfig a;
  a.endpoint_url = "http://localhost/v1/chat/completions";
  a.model_name = "m";
  ModelConfig b = a;
  EXPECT_EQ(a.Hash(), b.Hash());
  b.temperature = 0.1;
  EXPECT_NE(a.Hash(), b.Hash());
  EXPECT_EQ(a.ToJson().dump().find("Bearer"), std::string::npos);
}

PromptBundle SampleBundle(bool with_exemplar) {
  PromptRequest req{TaskKind::kOcr, Setting::kVanilla,
                    with_exemplar ? Shot::kOne : Shot::kZero, "img.png"};
  if (with_exemplar) req.exemplar = Exemplar{"ex.png", "example text", "a\nb\n"};
  return BuildPrompt(req);
}

TEST(ChatTest, RequestShape) {
  ModelConfig cfg;
  cfg.model_name = "vision-model";
  nlohmann::json r = BuildChatRequest(cfg, SampleBundle(true), "IMG", "EX");
  EXPECT_EQ(r["model"], "vision-model");
  EXPECT_EQ(r["max_tokens"], 4096);
  ASSERT_EQ(r["messages"].size(), 4u);
  EXPECT_EQ(r["messages"][0]["role"], "system");
  EXPECT_EQ(r["messages"][2]["role"], "assistant");
  EXPECT_EQ(r["messages"][2]["content"], "a\nb\n");
  std::string url = r["messages"][3]["content"][1]["image_url"]["url"];
  EXPECT_EQ(url, "data:image/png;base64," + Base64Encode("IMG"));
  EXPECT_EQ(BuildChatRequest(cfg, SampleBundle(false), "IMG", "")["messages"].size(),
            2u);
}

TEST(ChatTest, ExtractText) {
  using nlohmann::json;
  EXPECT_EQ(ExtractChatText(json::parse(
                R"({"choices":[{"message":{"content":"hello"}}]})")),
            "hello");
  EXPECT_EQ(ExtractChatText(json::parse(
                R"({"choices":[{"message":{"content":[{"type":"text","text":"a"},{"type":"text","text":"b"}]}}]})")),
            "ab");
  EXPECT_THROW(ExtractChatText(json::parse(R"({"choices":[]})")), ClientError);
  EXPECT_THROW(ExtractChatText(json::parse(R"({"error":"x"})")), ClientError);
}

// Local chat endpoint whose replies are scripted per call.
class FakeEndpoint {
 public:
  using Reply = std::function<void(httplib::Response&)>;

  explicit FakeEndpoint(std::vector<Reply> script) : script_(std::move(script)) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   std::size_t i = calls_++;
                   last_auth_ = req.get_header_value("Authorization");
                   script_[std::min(i, script_.size() - 1)](res);
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }
  int calls() const { return calls_; }
  std::string last_auth() const { return last_auth_; }

 private:
  httplib::Server server_;
  std::vector<Reply> script_;
  std::atomic<int> calls_{0};
  std::string last_auth_;
  int port_ = 0;
  std::thread thread_;
};

FakeEndpoint::Reply Status(int code, std::string retry_after = "") {
  return [code, retry_after](httplib::Response& res) {
    res.status = code;
    if (!retry_after.empty()) res.set_header("Retry-After", retry_after);
    res.set_content("{}", "application/json");
  };
}

FakeEndpoint::Reply Ok(const std::string& text) {
  return [text](httplib::Response& res) {
    nlohmann::json body = {
        {"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}},
        {"usage", {{"prompt_tokens", 10}, {"completion_tokens", 3}}}};
    res.set_content(body.dump(), "application/json");
  };
}

class HttpClientTest : public ::testing::Test {
 protected:
  void SetUp() override {
    setenv("SHEETVIS_TEST_KEY", "secret-key-123", 1);
    std::vector<std::uint8_t> png = EncodePng(RgbImage(60, 60, Rgb{255, 255, 255}));
    WriteAll(dir_ / "img.png", std::string(png.begin(), png.end()));
    std::vector<std::uint8_t> tiny = EncodePng(RgbImage(10, 10, Rgb{0, 0, 0}));
    WriteAll(dir_ / "tiny.png", std::string(tiny.begin(), tiny.end()));
  }

  ModelConfig Config(const std::string& url) {
    ModelConfig cfg;
    cfg.endpoint_url = url;
    cfg.model_name = "m";
    cfg.api_key_env = "SHEETVIS_TEST_KEY";
    cfg.max_retries = 2;
    cfg.request_timeout_s = 5;
    return cfg;
  }

  std::unique_ptr<HttpModelClient> Client(const ModelConfig& cfg,
                                          AuditLog* audit = nullptr) {
    auto c = std::make_unique<HttpModelClient>(cfg, audit);
    c->set_sleep_for_testing([this](double s) { sleeps_.push_back(s); });
    return c;
  }

  ClientError::Kind SendExpectingError(HttpModelClient& c, const PromptBundle& b) {
    try {
      c.Send(b, "id", dir_.path());
    } catch (const ClientError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no ClientError";
    return ClientError::Kind::kConfig;
  }

  TempDir dir_;
  std::vector<double> sleeps_;
};

TEST_F(HttpClientTest, RetriesRateLimitOnce) {
  FakeEndpoint ep({Status(429, "3"), Ok("day\ncost\n")});
  TempDir logdir;
  AuditLog audit(logdir / "audit.jsonl");
  auto c = Client(Config(ep.url()), &audit);
  ModelResponse r = c->Send(SampleBundle(false), "inst", dir_.path(), 2);
  EXPECT_EQ(r.text, "day\ncost\n");
  EXPECT_EQ(r.attempts, 2);
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.prompt_tokens, 10);
  EXPECT_EQ(r.completion_tokens, 3);
  EXPECT_EQ(ep.calls(), 2);
  ASSERT_EQ(sleeps_.size(), 1u);
  EXPECT_DOUBLE_EQ(sleeps_[0], 3.0);  // Retry-After beats the 1 s backoff
  EXPECT_EQ(ep.last_auth(), "Bearer secret-key-123");

  std::string log = ReadAll(logdir / "audit.jsonl");
  EXPECT_EQ(log.find("secret-key-123"), std::string::npos);
  nlohmann::json rec = nlohmann::json::parse(log.substr(0, log.find('\n')));
  EXPECT_EQ(rec["instance_id"], "inst");
  EXPECT_EQ(rec["repetition"], 2);
  EXPECT_EQ(rec["attempts"], 2);
  EXPECT_EQ(rec["response"], "day\ncost\n");
}

TEST_F(HttpClientTest, RefusedCredentialsAreNotRetried) {
  FakeEndpoint ep({Status(401)});
  auto c = Client(Config(ep.url()));
  EXPECT_EQ(SendExpectingError(*c, SampleBundle(false)), ClientError::Kind::kAuth);
  EXPECT_EQ(ep.calls(), 1);
}

TEST_F(HttpClientTest, MissingKeyFailsBeforeSending) {
  FakeEndpoint ep({Ok("x")});
  ModelConfig cfg = Config(ep.url());
  cfg.api_key_env = "SHEETVIS_TEST_KEY_UNSET";
  unsetenv("SHEETVIS_TEST_KEY_UNSET");
  auto c = Client(cfg);
  EXPECT_EQ(SendExpectingError(*c, SampleBundle(false)), ClientError::Kind::kAuth);
  EXPECT_EQ(ep.calls(), 0);
}

TEST_F(HttpClientTest, InvalidImageIsRejectedLocally) {
  FakeEndpoint ep({Ok("x")});
  auto c = Client(Config(ep.url()));
  PromptBundle b = SampleBundle(false);
  b.image_ref = "tiny.png";
  EXPECT_EQ(SendExpectingError(*c, b), ClientError::Kind::kImageRejected);
  WriteAll(dir_ / "junk.png", "not a png");
  b.image_ref = "junk.png";
  EXPECT_EQ(SendExpectingError(*c, b), ClientError::Kind::kImageRejected);
  EXPECT_EQ(ep.calls(), 0);
}

TEST_F(HttpClientTest, ServerErrorsExhaustRetries) {
  FakeEndpoint ep({Status(503)});
  auto c = Client(Config(ep.url()));
  EXPECT_EQ(SendExpectingError(*c, SampleBundle(false)), ClientError::Kind::kTimeout);
  EXPECT_EQ(ep.calls(), 3);
  EXPECT_EQ(sleeps_, (std::vector<double>{1.0, 2.0}));
}

TEST_F(HttpClientTest, OtherStatusIsBadResponse) {
  FakeEndpoint ep({Status(400)});
  auto c = Client(Config(ep.url()));
  EXPECT_EQ(SendExpectingError(*c, SampleBundle(false)),
            ClientError::Kind::kBadResponse);
  EXPECT_EQ(ep.calls(), 1);
}

TEST_F(HttpClientTest, SendsExemplarImage) {
  FakeEndpoint ep({Ok("a\n")});
  std::vector<std::uint8_t> png = EncodePng(RgbImage(70, 50, Rgb{1, 2, 3}));
  WriteAll(dir_ / "ex.png", std::string(png.begin(), png.end()));
  auto c = Client(Config(ep.url()));
  EXPECT_EQ(c->Send(SampleBundle(true), "id", dir_.path()).text, "a\n");
}

}  // namespace
}  // namespace sheetvis
