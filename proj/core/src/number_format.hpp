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

#ifndef SHEETVIS_NUMBER_FORMAT_HPP_
#define SHEETVIS_NUMBER_FORMAT_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace sheetvis::internal {

// Format code of a built-in number format id, or nullopt if unknown.
std::optional<std::string> BuiltinFormatCode(int id);

// Excel "General" rendering: integers without a decimal point, otherwise up
// to 15 significant digits.
std::string FormatGeneral(double value);

// Renders `value` with an OOXML number format code. Supports fixed decimals,
// thousands grouping, percent, scientific, quoted literals and date/time
// codes (1900 date system). Returns nullopt for codes it cannot interpret,
// in which case callers fall back to the raw stored value.
std::optional<std::string> FormatNumber(double value, std::string_view code);

}  // namespace sheetvis::internal

#endif  // SHEETVIS_NUMBER_FORMAT_HPP_
