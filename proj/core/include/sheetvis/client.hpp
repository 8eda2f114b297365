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

// Answering task instances: a chat-completions HTTP client for hosted
// vision models, a perfect oracle, and a seeded noise injector that degrades
// oracle answers in controlled ways.

#ifndef SHEETVIS_CLIENT_HPP_
#define SHEETVIS_CLIENT_HPP_

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sheetvis/prompt.hpp"
#include "sheetvis/task.hpp"

namespace sheetvis {

struct ModelConfig {
  std::string endpoint_url;  // e.g. https://host/v1/chat/completions
  std::string model_name;
  std::string api_key_env = "SHEETVIS_API_KEY";
  double temperature = 0.7;
  double top_p = 0.95;
  int max_output_tokens = 4096;
  double request_timeout_s = 120;
  int max_retries = 4;
  int max_concurrent_requests = 4;
  double backoff_initial_s = 1.0;
  double backoff_max_s = 60.0;

  // Throws ConfigError.
  void Validate() const;
  // Everything except secrets.
  nlohmann::json ToJson() const;
  // SHA-256 of ToJson(), hex.
  std::string Hash() const;
};

struct NoiseSpec {
  double drop_rate = 0;
  double insert_rate = 0;
  int row_offset = 0;
  double value_corrupt_rate = 0;
  std::uint64_t seed = 0;

  // Throws ConfigError for rates outside [0, 1].
  void Validate() const;
  bool IsZero() const {
    return drop_rate == 0 && insert_rate == 0 && row_offset == 0 &&
           value_corrupt_rate == 0;
  }
  nlohmann::json ToJson() const;
};

// The ground truth of `t` written in its grammar.
std::string OracleAnswer(const TaskInstance& t);

// Parses `answer` with the instance grammar, applies noise item by item and
// serializes the result again:
//   * each item (cell, pair, address, table, range) is dropped at drop_rate;
//   * each value string (cell text, pair value, boundary token) is
//     corrupted at value_corrupt_rate by replacing one character, never
//     yielding a value present in the instance's truth;
//   * every row in an address moves by row_offset (rows stay >= 1);
//   * after each item a spurious one is inserted at insert_rate.
// The generator is seeded from spec.seed and the instance id. Throws
// NoiseError when the answer does not parse cleanly.
std::string Perturb(std::string_view answer, const TaskInstance& t,
                    const NoiseSpec& spec);

std::string Base64Encode(std::string_view bytes);
std::string Sha256Hex(std::string_view bytes);

// Thread-safe JSONL writer. Records are flushed one line at a time.
class AuditLog {
 public:
  explicit AuditLog(const std::filesystem::path& path);
  void Write(const nlohmann::json& record);

 private:
  std::mutex mu_;
  std::ofstream out_;
};

struct ModelResponse {
  std::string text;
  int status = 0;
  int attempts = 0;
  double latency_s = 0;
  std::optional<int> prompt_tokens;
  std::optional<int> completion_tokens;
};

// Chat-completions request body with the images inlined as base64 data URLs.
nlohmann::json BuildChatRequest(const ModelConfig& cfg, const PromptBundle& b,
                                std::string_view image_png,
                                std::string_view exemplar_png);

// Text of the first choice; accepts string or list-of-parts content. Throws
// ClientError(kBadResponse).
std::string ExtractChatText(const nlohmann::json& body);

class HttpModelClient {
 public:
  explicit HttpModelClient(ModelConfig cfg, AuditLog* audit = nullptr);

  // Sends one bundle; images are read relative to `base_dir`. Retries 408,
  // 429, 5xx and transport failures with exponential backoff, honouring
  // Retry-After. At most max_concurrent_requests calls run at once. Throws
  // ClientError.
  ModelResponse Send(const PromptBundle& b, const std::string& instance_id,
                     const std::filesystem::path& base_dir, int repetition = 0);

  void set_sleep_for_testing(std::function<void(double)> sleep) {
    sleep_ = std::move(sleep);
  }

 private:
  ModelResponse SendLimited(const std::string& body,
                            const std::string& api_key);
  void Audit(const std::string& instance_id, int repetition,
             const ModelResponse* r, const std::string& error, int attempts,
             double latency_s);

  ModelConfig cfg_;
  AuditLog* audit_;
  std::function<void(double)> sleep_;
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
};

}  // namespace sheetvis

#endif  // SHEETVIS_CLIENT_HPP_
