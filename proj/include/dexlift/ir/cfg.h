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

#pragma once

#include <cstddef>
#include <vector>

#include "dexlift/ir/ir.h"

namespace dexlift::ir {

enum class EdgeKind { kFallthrough, kBranch, kSwitchCase, kExceptional };

struct CfgEdge {
  size_t from = 0;
  size_t to = 0;
  EdgeKind kind = EdgeKind::kFallthrough;
};

// Nodes are the body's statements, by index. Parallel edges between the
// same pair of nodes are merged, keeping the first kind seen.
struct Cfg {
  std::vector<const Statement*> nodes;
  std::vector<CfgEdge> edges;
  std::vector<std::vector<size_t>> successors;    // per node, edge order
  std::vector<std::vector<size_t>> predecessors;  // per node
};

// Normal-flow successors: fall-through first, then branch or case targets
// in declaration order, without duplicates.
std::vector<Statement*> successors(const Body& body, const Statement* s);

// Throws DanglingTarget when a branch leaves the body.
Cfg build_cfg(const Body& body, bool with_exceptional_edges);

// Handlers reachable from s through the body's traps.
std::vector<Statement*> exceptional_successors(const Body& body, const Statement* s);

}  // namespace dexlift::ir
