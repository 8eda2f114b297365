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

#ifndef SHEETVIS_XML_DOM_HPP_
#define SHEETVIS_XML_DOM_HPP_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sheetvis::internal {

// Minimal element tree built with expat. Namespace prefixes are stripped from
// element and attribute names ("x:c" -> "c", "r:id" -> "id"), which is enough
// for the OOXML parts we read.
struct XmlNode {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::string text;  // concatenated character data directly inside
  std::vector<std::unique_ptr<XmlNode>> children;

  const XmlNode* Child(std::string_view n) const;
  std::vector<const XmlNode*> Children(std::string_view n) const;
  // Attribute value or `fallback`.
  std::string Attr(std::string_view n, std::string fallback = "") const;
  bool HasAttr(std::string_view n) const;
};

// Throws IngestError with `what` as context on malformed XML.
std::unique_ptr<XmlNode> ParseXml(std::string_view doc,
                                  const std::string& what);

}  // namespace sheetvis::internal

#endif  // SHEETVIS_XML_DOM_HPP_
