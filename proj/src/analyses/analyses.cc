// Copyright 2026 The dexlift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dexlift/analyses/analyses.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "dexlift/ir/cfg.h"
#include "dexlift/ir/text.h"

namespace dexlift::analyses {
namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string_view edge_label(ir::EdgeKind kind) {
  switch (kind) {
    case ir::EdgeKind::kFallthrough: return "fallthrough";
    case ir::EdgeKind::kBranch: return "branch";
    case ir::EdgeKind::kSwitchCase: return "case";
    case ir::EdgeKind::kExceptional: return "exception";
  }
  return "";
}

std::string_view kind_name(ir::InvokeKind kind) {
  switch (kind) {
    case ir::InvokeKind::kVirtual: return "virtual";
    case ir::InvokeKind::kSuper: return "super";
    case ir::InvokeKind::kDirect: return "direct";
    case ir::InvokeKind::kStatic: return "static";
    case ir::InvokeKind::kInterface: return "interface";
  }
  return "";
}

}  // namespace

std::string cfg_to_dot(const ir::Body& body, bool exceptional_edges) {
  const ir::Cfg cfg = ir::build_cfg(body, exceptional_edges);
  const auto index = body.index_map();
  std::ostringstream os;
  os << "digraph " << quote(body.signature.to_string()) << " {\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (size_t i = 0; i < body.statements.size(); ++i) {
    const std::string text = "L" + std::to_string(i) + ": " + ir::statement_text(body, *body.statements[i], index);
    os << "  n" << i << " [label=" << quote(text) << "];\n";
  }
  for (const ir::CfgEdge& e : cfg.edges) {
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << edge_label(e.kind) << "\"";
    if (e.kind == ir::EdgeKind::kExceptional) os << ", style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

CallGraph build_call_graph(const dex::DexFile& dex, const std::vector<const ir::Body*>& bodies) {
  std::set<std::string> defined_classes;
  for (const auto& c : dex.class_defs()) defined_classes.insert(c.this_type);

  std::vector<const ir::Body*> ordered = bodies;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ir::Body* a, const ir::Body* b) { return a->signature < b->signature; });
  std::set<dex::MethodRef> nodes;
  CallGraph cg;
  for (const ir::Body* body : ordered) {
    nodes.insert(body->signature);
    for (size_t i = 0; i < body->statements.size(); ++i) {
      const auto* inv = body->statements[i]->as<ir::InvokeStmt>();
      if (inv == nullptr) continue;
      nodes.insert(inv->method);
      cg.edges.push_back(CallEdge{body->signature, i, inv->method, inv->kind});
    }
  }
  cg.nodes.assign(nodes.begin(), nodes.end());
  for (const auto& m : cg.nodes) {
    if (!defined_classes.count(m.owner)) cg.external.push_back(m);
  }
  return cg;
}

std::string callgraph_to_dot(const CallGraph& cg) {
  std::ostringstream os;
  os << "digraph callgraph {\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& m : cg.nodes) {
    os << "  " << quote(m.to_string());
    if (std::binary_search(cg.external.begin(), cg.external.end(), m)) os << " [shape=ellipse, style=dashed]";
    os << ";\n";
  }
  for (const auto& e : cg.edges) {
    os << "  " << quote(e.caller.to_string()) << " -> " << quote(e.callee.to_string()) << " [label=\""
       << kind_name(e.kind) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string cfg_file_name(const dex::MethodRef& method) {
  std::string cls = method.owner;
  if (cls.size() >= 2 && cls.front() == 'L' && cls.back() == ';') cls = cls.substr(1, cls.size() - 2);
  std::replace(cls.begin(), cls.end(), '/', '.');
  std::string out = cls + "_" + method.name;
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '$' || c == '-';
    if (!ok) c = '_';
  }
  return out + ".cfg.dot";
}

}  // namespace dexlift::analyses
