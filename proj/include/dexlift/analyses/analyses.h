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

// Graph artifacts over lifted bodies: per-method control flow graphs and an
// application call graph, both rendered as Graphviz DOT.

#pragma once

#include <string>
#include <vector>

#include "dexlift/dex/dex_file.h"
#include "dexlift/ir/ir.h"

namespace dexlift::analyses {

// One node per statement, labelled with its listing text. Edge labels are
// "fallthrough", "branch", "case" and, with exceptional_edges, dashed
// "exception" edges into trap handlers.
std::string cfg_to_dot(const ir::Body& body, bool exceptional_edges = false);

struct CallEdge {
  dex::MethodRef caller;
  size_t site = 0;  // statement index in the caller's body
  dex::MethodRef callee;
  ir::InvokeKind kind = ir::InvokeKind::kStatic;
};

struct CallGraph {
  std::vector<dex::MethodRef> nodes;  // sorted, unique
  std::vector<dex::MethodRef> external;  // subset of nodes not defined in the dex
  std::vector<CallEdge> edges;  // by caller, then call site
};

// One edge per invoke statement, to the method the instruction names. No
// dispatch resolution: a virtual call targets the declared method.
CallGraph build_call_graph(const dex::DexFile& dex, const std::vector<const ir::Body*>& bodies);

// Methods defined in the dex are boxes, external ones dashed ellipses.
std::string callgraph_to_dot(const CallGraph& cg);

// "<class>_<method>.cfg.dot" with the class in dotted form and characters
// outside [A-Za-z0-9._$-] replaced by '_'.
std::string cfg_file_name(const dex::MethodRef& method);

inline constexpr char kCallGraphFileName[] = "app.callgraph.dot";

}  // namespace dexlift::analyses
