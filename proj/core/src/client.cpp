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
#include "sheetvis/client.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "sheetvis/errors.hpp"
#include "sheetvis/random.hpp"
#include "sheetvis/render.hpp"

namespace sheetvis {
namespace {

using nlohmann::json;

constexpr std::string_view kCorruptChars = "#%&@?~";

void CheckRate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must be in [0, 1], got " +
                      std::to_string(v));
  }
}

// Byte offsets of UTF-8 code point starts.
std::vector<std::size_t> CodePointStarts(std::string_view s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  return out;
}

class Noiser {
 public:
  Noiser(const TaskInstance& t, const NoiseSpec& spec)
      : t_(t), spec_(spec), rng_(MixSeed(spec.seed, StableHash(t.id))) {
    for (const OcrCell& c : t.ocr.sequence) vocab_.insert(c.text);
    for (const SpatialQuery& q : t.spatial.queries) vocab_.insert(q.value);
    for (const BorderContents& b : t.tables.boundaries) {
      for (const auto* edge : {&b.top, &b.bottom, &b.left, &b.right}) {
        vocab_.insert(edge->begin(), edge->end());
      }
    }
    pool_.assign(vocab_.begin(), vocab_.end());
  }

  bool Drop() { return rng_.Chance(spec_.drop_rate); }
  bool Insert() { return rng_.Chance(spec_.insert_rate); }

  std::string MaybeCorrupt(const std::string& s) {
    return rng_.Chance(spec_.value_corrupt_rate) ? Corrupt(s) : s;
  }

  std::string Corrupt(const std::string& s) {
    std::string out = s;
    std::vector<std::size_t> starts = CodePointStarts(s);
    if (starts.empty()) {
      out = "#";
    } else {
      std::size_t k = rng_.Below(starts.size());
      std::size_t begin = starts[k];
      std::size_t end = k + 1 < starts.size() ? starts[k + 1] : s.size();
      std::string_view old = std::string_view(s).substr(begin, end - begin);
      char c;
      do {
        c = kCorruptChars[rng_.Below(kCorruptChars.size())];
      } while (old.size() == 1 && old[0] == c);
      out.replace(begin, end - begin, 1, c);
    }
    while (vocab_.count(out)) out += '#';
    return out;
  }

  std::string SpuriousValue() {
    if (pool_.empty()) return "#" + std::to_string(rng_.Below(1000));
    return Corrupt(pool_[rng_.Below(pool_.size())]);
  }

  CellAddress Shift(CellAddress a) const {
    long long row = static_cast<long long>(a.row) + spec_.row_offset;
    a.row = static_cast<int>(std::clamp<long long>(row, 1, 1 << 24));
    return a;
  }

  CellAddress RandomAddress() {
    int rows = std::max(1, t_.sheet_rows);
    int cols = std::max(1, t_.sheet_cols);
    return {rng_.Between(1, rows), rng_.Between(1, cols)};
  }

  std::vector<std::string> Values(const std::vector<std::string>& in,
                                  bool allow_drop) {
    std::vector<std::string> out;
    for (const std::string& v : in) {
      if (allow_drop && Drop()) continue;
      out.push_back(MaybeCorrupt(v));
      if (allow_drop && Insert()) out.push_back(SpuriousValue());
    }
    return out;
  }

 private:
  const TaskInstance& t_;
  const NoiseSpec& spec_;
  Rng rng_;
  std::set<std::string> vocab_;
  std::vector<std::string> pool_;
};

std::string Timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string ReadFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    throw ClientError(ClientError::Kind::kImageRejected,
                      "cannot read image " + p.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void CheckImage(const std::string& bytes, const std::string& name) {
  ImageValidation v;
  try {
    v = ValidateImage(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
  } catch (const ImageFormatError& e) {
    throw ClientError(ClientError::Kind::kImageRejected,
                      "image " + name + " rejected: " + e.what());
  }
  if (!v.ok) {
    std::string why;
    for (const std::string& f : v.failures) why += (why.empty() ? "" : "; ") + f;
    throw ClientError(ClientError::Kind::kImageRejected,
                      "image " + name + " rejected: " + why);
  }
}

json ImagePart(std::string_view png) {
  return {{"type", "image_url"},
          {"image_url",
           {{"url", "data:image/png;base64," + Base64Encode(png)}}}};
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint SplitUrl(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ClientError(ClientError::Kind::kConfig,
                      "endpoint must be an absolute URL: " + url);
  }
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ClientError(ClientError::Kind::kConfig,
                      "unsupported URL scheme: " + scheme);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool Retryable(int status) {
  return status == 408 || status == 429 || status == 500 || status == 502 ||
         status == 503 || status == 504;
}

}  // namespace

void ModelConfig::Validate() const {
  if (!(temperature >= 0 && temperature <= 2)) {
    throw ConfigError("temperature must be in [0, 2]");
  }
  if (!(top_p > 0 && top_p <= 1)) throw ConfigError("top_p must be in (0, 1]");
  if (max_output_tokens < 1) throw ConfigError("max_output_tokens must be >= 1");
  if (!(request_timeout_s > 0)) {
    throw ConfigError("request_timeout_s must be positive");
  }
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (max_concurrent_requests < 1) {
    throw ConfigError("max_concurrent_requests must be >= 1");
  }
  if (!(backoff_initial_s >= 0) || !(backoff_max_s >= backoff_initial_s)) {
    throw ConfigError("invalid backoff bounds");
  }
}

json ModelConfig::ToJson() const {
  return {{"endpoint_url", endpoint_url},
          {"model_name", model_name},
          {"api_key_env", api_key_env},
          {"temperature", temperature},
          {"top_p", top_p},
          {"max_output_tokens", max_output_tokens},
          {"request_timeout_s", request_timeout_s},
          {"max_retries", max_retries},
          {"max_concurrent_requests", max_concurrent_requests},
          {"backoff_initial_s", backoff_initial_s},
          {"backoff_max_s", backoff_max_s}};
}

std::string ModelConfig::Hash() const { return Sha256Hex(ToJson().dump()); }

void NoiseSpec::Validate() const {
  CheckRate(drop_rate, "drop_rate");
  CheckRate(insert_rate, "insert_rate");
  CheckRate(value_corrupt_rate, "value_corrupt_rate");
}

json NoiseSpec::ToJson() const {
  return {{"drop_rate", drop_rate},
          {"insert_rate", insert_rate},
          {"row_offset", row_offset},
          {"value_corrupt_rate", value_corrupt_rate},
          {"seed", seed}};
}

std::string OracleAnswer(const TaskInstance& t) {
  switch (t.task) {
    case TaskKind::kOcr:
      return SerializeOcr(t.ocr.Texts());
    case TaskKind::kSpatial: {
      std::vector<SpatialPair> pairs;
      for (const SpatialQuery& q : t.spatial.queries) {
        pairs.push_back({q.value, q.answer});
      }
      return SerializePairs(pairs, t.form);
    }
    case TaskKind::kFormat:
      return SerializeAddresses(t.format_cells, t.form);
    case TaskKind::kTable:
      if (t.grammar == Grammar::kRangeLines) {
        return SerializeRanges(t.tables.ranges);
      } else {
        std::vector<BorderPrediction> preds;
        for (const BorderContents& b : t.tables.boundaries) {
          preds.push_back(ToPrediction(b));
        }
        return SerializeFourBoundaries(preds);
      }
  }
  return {};
}

std::string Perturb(std::string_view answer, const TaskInstance& t,
                    const NoiseSpec& spec) {
  spec.Validate();
  ParsedPrediction p;
  try {
    p = Parse(answer, t.grammar, t.form);
  } catch (const TableParseError& e) {
    throw NoiseError(std::string("answer does not parse: ") + e.what());
  }
  if (!p.rejects.empty()) {
    throw NoiseError("answer has " + std::to_string(p.rejects.size()) +
                     " unparseable line(s), first: \"" + p.rejects[0].text +
                     "\"");
  }
  Noiser n(t, spec);
  switch (p.grammar) {
    case Grammar::kOcrLines:
      p.ocr = n.Values(p.ocr, true);
      break;
    case Grammar::kPairLines: {
      std::vector<SpatialPair> out;
      for (const SpatialPair& sp : p.pairs) {
        if (n.Drop()) continue;
        out.push_back({n.MaybeCorrupt(sp.value), n.Shift(sp.addr)});
        if (n.Insert()) out.push_back({n.SpuriousValue(), n.RandomAddress()});
      }
      p.pairs = std::move(out);
      break;
    }
    case Grammar::kAddressLines: {
      AddressSet out;
      for (const CellAddress& a : p.addresses) {
        if (n.Drop()) continue;
        out.insert(n.Shift(a));
        if (n.Insert()) out.insert(n.RandomAddress());
      }
      p.addresses = std::move(out);
      break;
    }
    case Grammar::kFourBoundariesJson: {
      std::vector<BorderPrediction> out;
      for (const BorderPrediction& b : p.tables) {
        if (n.Drop()) continue;
        out.push_back({n.Values(b.top, false), n.Values(b.bottom, false),
                       n.Values(b.left, false), n.Values(b.right, false)});
        if (n.Insert()) {
          BorderPrediction fake;
          for (auto* edge : {&fake.top, &fake.bottom, &fake.left, &fake.right}) {
            for (int i = 0; i < 3; ++i) edge->push_back(n.SpuriousValue());
          }
          out.push_back(std::move(fake));
        }
      }
      p.tables = std::move(out);
      break;
    }
    case Grammar::kRangeLines: {
      std::vector<TableRange> out;
      for (const TableRange& r : p.ranges) {
        if (n.Drop()) continue;
        out.push_back(
            TableRange{n.Shift(r.top_left), n.Shift(r.bottom_right)}.Normalized());
        if (n.Insert()) {
          out.push_back(
              TableRange{n.RandomAddress(), n.RandomAddress()}.Normalized());
        }
      }
      p.ranges = std::move(out);
      break;
    }
  }
  return Serialize(p, t.form);
}

std::string Base64Encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(bytes.data()),
                          static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) !=
      1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

AuditLog::AuditLog(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw ConfigError("cannot open audit log " + path.string());
}

void AuditLog::Write(const json& record) {
  std::lock_guard<std::mutex> lock(mu_);
  out_ << record.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  out_.flush();
}

json BuildChatRequest(const ModelConfig& cfg, const PromptBundle& b,
                      std::string_view image_png,
                      std::string_view exemplar_png) {
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", b.system_text}});
  if (b.exemplar) {
    messages.push_back(
        {{"role", "user"},
         {"content", json::array({{{"type", "text"}, {"text", b.exemplar->user_text}},
                                  ImagePart(exemplar_png)})}});
    messages.push_back(
        {{"role", "assistant"}, {"content", b.exemplar->answer_text}});
  }
  messages.push_back(
      {{"role", "user"},
       {"content", json::array({{{"type", "text"}, {"text", b.user_text}},
                                ImagePart(image_png)})}});
  return {{"model", cfg.model_name},
          {"temperature", cfg.temperature},
          {"top_p", cfg.top_p},
          {"max_tokens", cfg.max_output_tokens},
          {"messages", std::move(messages)}};
}

std::string ExtractChatText(const json& body) {
  auto bad = [](const std::string& why) {
    return ClientError(ClientError::Kind::kBadResponse,
                       "unexpected response body: " + why);
  };
  if (!body.is_object() || !body.contains("choices") ||
      !body["choices"].is_array() || body["choices"].empty()) {
    throw bad("no choices");
  }
  const json& choice = body["choices"][0];
  if (!choice.is_object() || !choice.contains("message")) {
    throw bad("no message");
  }
  const json& content = choice["message"].value("content", json());
  if (content.is_string()) return content.get<std::string>();
  if (content.is_array()) {
    std::string text;
    for (const json& part : content) {
      if (part.is_object() && part.value("type", "") == "text") {
        text += part.value("text", "");
      }
    }
    return text;
  }
  if (content.is_null()) return "";
  throw bad("content is neither text nor parts");
}

HttpModelClient::HttpModelClient(ModelConfig cfg, AuditLog* audit)
    : cfg_(std::move(cfg)), audit_(audit) {
  cfg_.Validate();
  sleep_ = [](double s) {
    std::this_thread::sleep_for(std::chrono::duration<double>(s));
  };
}

void HttpModelClient::Audit(const std::string& instance_id, int repetition,
                            const ModelResponse* r, const std::string& error,
                            int attempts, double latency_s) {
  if (!audit_) return;
  json rec = {{"instance_id", instance_id},
              {"repetition", repetition},
              {"timestamp", Timestamp()},
              {"latency_s", latency_s},
              {"attempts", attempts},
              {"model", cfg_.model_name}};
  if (r) {
    rec["status"] = r->status;
    rec["prompt_tokens"] = r->prompt_tokens ? json(*r->prompt_tokens) : json();
    rec["completion_tokens"] =
        r->completion_tokens ? json(*r->completion_tokens) : json();
    rec["response"] = r->text;
  } else {
    rec["error"] = error;
  }
  audit_->Write(rec);
}

ModelResponse HttpModelClient::Send(const PromptBundle& b,
                                    const std::string& instance_id,
                                    const std::filesystem::path& base_dir,
                                    int repetition) {
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };
  try {
    std::string image = ReadFile(base_dir / b.image_ref);
    CheckImage(image, b.image_ref);
    std::string exemplar;
    if (b.exemplar) {
      exemplar = ReadFile(base_dir / b.exemplar->image_ref);
      CheckImage(exemplar, b.exemplar->image_ref);
    }
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ClientError(ClientError::Kind::kAuth,
                        "environment variable " + cfg_.api_key_env +
                            " is not set");
    }
    std::string body = BuildChatRequest(cfg_, b, image, exemplar)
                           .dump(-1, ' ', false, json::error_handler_t::replace);
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [&] { return in_flight_ < cfg_.max_concurrent_requests; });
      ++in_flight_;
    }
    ModelResponse r;
    try {
      r = SendLimited(body, key);
    } catch (...) {
      {
        std::lock_guard<std::mutex> lock(mu_);
        --in_flight_;
      }
      cv_.notify_one();
      throw;
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      --in_flight_;
    }
    cv_.notify_one();
    r.latency_s = elapsed();
    Audit(instance_id, repetition, &r, "", r.attempts, r.latency_s);
    return r;
  } catch (const ClientError& e) {
    Audit(instance_id, repetition, nullptr, e.what(), 0, elapsed());
    throw;
  }
}

ModelResponse HttpModelClient::SendLimited(const std::string& body,
                                           const std::string& api_key) {
  Endpoint ep = SplitUrl(cfg_.endpoint_url);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key}};
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    httplib::Client cli(ep.origin);
    auto secs = static_cast<time_t>(cfg_.request_timeout_s);
    auto usecs = static_cast<time_t>(
        (cfg_.request_timeout_s - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    httplib::Result res = cli.Post(ep.path, headers, body, "application/json");

    double wait = std::min(cfg_.backoff_max_s,
                           cfg_.backoff_initial_s * std::pow(2.0, attempt));
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status == 200) {
      json doc = json::parse(res->body, nullptr, false);
      if (doc.is_discarded()) {
        throw ClientError(ClientError::Kind::kBadResponse,
                          "response body is not JSON");
      }
      ModelResponse r;
      r.text = ExtractChatText(doc);
      r.status = res->status;
      r.attempts = attempt + 1;
      if (doc.contains("usage") && doc["usage"].is_object()) {
        const json& u = doc["usage"];
        if (u.contains("prompt_tokens") && u["prompt_tokens"].is_number_integer()) {
          r.prompt_tokens = u["prompt_tokens"].get<int>();
        }
        if (u.contains("completion_tokens") &&
            u["completion_tokens"].is_number_integer()) {
          r.completion_tokens = u["completion_tokens"].get<int>();
        }
      }
      return r;
    } else if (res->status == 401 || res->status == 403) {
      throw ClientError(ClientError::Kind::kAuth,
                        "endpoint refused credentials (HTTP " +
                            std::to_string(res->status) + ")");
    } else if (Retryable(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      if (res->has_header("Retry-After")) {
        char* end = nullptr;
        std::string ra = res->get_header_value("Retry-After");
        double v = std::strtod(ra.c_str(), &end);
        if (end != ra.c_str() && v >= 0) {
          wait = std::min(cfg_.backoff_max_s, std::max(wait, v));
        }
      }
    } else {
      throw ClientError(ClientError::Kind::kBadResponse,
                        "HTTP " + std::to_string(res->status) + ": " +
                            res->body.substr(0, 200));
    }
    if (attempt < cfg_.max_retries) sleep_(wait);
  }
  throw ClientError(ClientError::Kind::kTimeout,
                    "gave up after " + std::to_string(cfg_.max_retries + 1) +
                        " attempts; last error: " + last_error);
}

}  // namespace sheetvis
