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

#ifndef SHEETVIS_ERRORS_HPP_
#define SHEETVIS_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sheetvis {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed address, range or other textual input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Unreadable or structurally invalid xlsx archive.
class IngestError : public Error {
 public:
  using Error::Error;
};

// Canonical JSON document violating the schema. `path()` is a JSON path
// such as "$.sheets[0].cells[3].r".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Rendered image would exceed the maximum model-input dimension.
class OversizeError : public Error {
 public:
  using Error::Error;
};

// Bytes are not a decodable PNG.
class ImageFormatError : public Error {
 public:
  using Error::Error;
};

// Address or range outside the sheet.
class BoundsError : public Error {
 public:
  using Error::Error;
};

class InsufficientUniquenessError : public Error {
 public:
  InsufficientUniquenessError(std::size_t requested, std::size_t available)
      : Error("requested " + std::to_string(requested) +
              " unique-valued cells but only " + std::to_string(available) +
              " are available"),
        available_(available) {}
  std::size_t available() const { return available_; }

 private:
  std::size_t available_;
};

// Forbidden (task, setting) combination or invalid configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Invalid JSON in a four-boundary table answer.
class TableParseError : public Error {
 public:
  using Error::Error;
};

// Raised by the noise injector when the answer does not parse.
class NoiseError : public Error {
 public:
  using Error::Error;
};

// One predicted border could not be mapped to a sheet row or column.
class UnmappableTableError : public Error {
 public:
  UnmappableTableError(std::string edge, double best_confidence)
      : Error("cannot map " + edge + " border (best confidence " +
              std::to_string(best_confidence) + ")"),
        edge_(std::move(edge)),
        best_confidence_(best_confidence) {}
  const std::string& edge() const { return edge_; }
  double best_confidence() const { return best_confidence_; }

 private:
  std::string edge_;
  double best_confidence_;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

// Instance/response mismatch while scoring.
class ScoringError : public Error {
 public:
  using Error::Error;
};

// Failure talking to a model endpoint.
class ClientError : public Error {
 public:
  enum class Kind {
    kAuth,           // 401 or 403
    kTimeout,        // transient failures outlasted every retry
    kImageRejected,  // image failed local validation; nothing was sent
    kBadResponse,    // non-retryable status or malformed body
    kConfig,         // unusable endpoint or missing key
  };

  ClientError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace sheetvis

#endif  // SHEETVIS_ERRORS_HPP_
