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

#include "xml_dom.hpp"

#include <expat.h>

#include "sheetvis/errors.hpp"

namespace sheetvis::internal {
namespace {

std::string LocalName(const char* qname) {
  std::string_view n(qname);
  auto colon = n.rfind(':');
  return std::string(colon == std::string_view::npos ? n : n.substr(colon + 1));
}

struct BuildState {
  std::unique_ptr<XmlNode> root;
  std::vector<XmlNode*> stack;
};

void OnStart(void* data, const XML_Char* name, const XML_Char** atts) {
  auto* st = static_cast<BuildState*>(data);
  auto node = std::make_unique<XmlNode>();
  node->name = LocalName(name);
  for (int i = 0; atts[i] != nullptr; i += 2) {
    node->attrs[LocalName(atts[i])] = atts[i + 1];
  }
  XmlNode* raw = node.get();
  if (st->stack.empty()) {
    st->root = std::move(node);
  } else {
    st->stack.back()->children.push_back(std::move(node));
  }
  st->stack.push_back(raw);
}

void OnEnd(void* data, const XML_Char*) {
  static_cast<BuildState*>(data)->stack.pop_back();
}

void OnText(void* data, const XML_Char* s, int len) {
  auto* st = static_cast<BuildState*>(data);
  if (!st->stack.empty()) st->stack.back()->text.append(s, len);
}

}  // namespace

const XmlNode* XmlNode::Child(std::string_view n) const {
  for (const auto& c : children) {
    if (c->name == n) return c.get();
  }
  return nullptr;
}

std::vector<const XmlNode*> XmlNode::Children(std::string_view n) const {
  std::vector<const XmlNode*> out;
  for (const auto& c : children) {
    if (c->name == n) out.push_back(c.get());
  }
  return out;
}

std::string XmlNode::Attr(std::string_view n, std::string fallback) const {
  auto it = attrs.find(std::string(n));
  return it == attrs.end() ? fallback : it->second;
}

bool XmlNode::HasAttr(std::string_view n) const {
  return attrs.count(std::string(n)) > 0;
}

std::unique_ptr<XmlNode> ParseXml(std::string_view doc,
                                  const std::string& what) {
  BuildState st;
  XML_Parser parser = XML_ParserCreate("UTF-8");
  XML_SetUserData(parser, &st);
  XML_SetElementHandler(parser, OnStart, OnEnd);
  XML_SetCharacterDataHandler(parser, OnText);
  bool ok = XML_Parse(parser, doc.data(), static_cast<int>(doc.size()),
                      XML_TRUE) != XML_STATUS_ERROR;
  std::string err = ok ? "" : XML_ErrorString(XML_GetErrorCode(parser));
  XML_ParserFree(parser);
  if (!ok || !st.root) {
    throw IngestError("malformed XML in " + what + ": " + err);
  }
  return std::move(st.root);
}

}  // namespace sheetvis::internal
