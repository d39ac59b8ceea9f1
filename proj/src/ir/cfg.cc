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

#include "dexlift/ir/cfg.h"

#include <algorithm>
#include <set>

#include "dexlift/error.h"

namespace dexlift::ir {
namespace {

struct Flow {
  Statement* to;
  EdgeKind kind;
};

std::vector<Flow> normal_flow(const Body& body, size_t i) {
  const Statement& s = *body.statements[i];
  std::vector<Flow> out;
  if (falls_through(s) && i + 1 < body.statements.size()) {
    out.push_back({body.statements[i + 1].get(), EdgeKind::kFallthrough});
  }
  if (const auto* t = s.as<IfStmt>()) out.push_back({t->target, EdgeKind::kBranch});
  if (const auto* g = s.as<GotoStmt>()) out.push_back({g->target, EdgeKind::kBranch});
  if (const auto* t = s.as<TableSwitchStmt>()) {
    out.push_back({t->default_target, EdgeKind::kFallthrough});
    for (Statement* p : t->targets) out.push_back({p, EdgeKind::kSwitchCase});
  }
  if (const auto* l = s.as<LookupSwitchStmt>()) {
    out.push_back({l->default_target, EdgeKind::kFallthrough});
    for (Statement* p : l->targets) out.push_back({p, EdgeKind::kSwitchCase});
  }
  return out;
}

std::vector<Statement*> handlers_for(const Body& body, size_t i,
                                     const std::unordered_map<const Statement*, size_t>& index) {
  std::vector<Statement*> out;
  if (!can_throw(*body.statements[i])) return out;
  for (const Trap& t : body.traps) {
    const auto first = index.find(t.first);
    const auto last = index.find(t.last);
    if (first == index.end() || last == index.end()) continue;
    if (i < first->second || i > last->second) continue;
    if (std::find(out.begin(), out.end(), t.handler) == out.end()) out.push_back(t.handler);
  }
  return out;
}

}  // namespace

std::vector<Statement*> successors(const Body& body, const Statement* s) {
  const auto index = body.index_map();
  const auto it = index.find(s);
  if (it == index.end()) return {};
  std::vector<Statement*> out;
  for (const Flow& f : normal_flow(body, it->second)) {
    if (std::find(out.begin(), out.end(), f.to) == out.end()) out.push_back(f.to);
  }
  return out;
}

std::vector<Statement*> exceptional_successors(const Body& body, const Statement* s) {
  const auto index = body.index_map();
  const auto it = index.find(s);
  if (it == index.end()) return {};
  return handlers_for(body, it->second, index);
}

Cfg build_cfg(const Body& body, bool with_exceptional_edges) {
  const auto index = body.index_map();
  Cfg cfg;
  const size_t n = body.statements.size();
  cfg.successors.resize(n);
  cfg.predecessors.resize(n);
  for (const auto& s : body.statements) cfg.nodes.push_back(s.get());
  std::set<std::pair<size_t, size_t>> seen;
  auto add = [&](size_t from, const Statement* to, EdgeKind kind) {
    const auto it = index.find(to);
    if (it == index.end()) {
      Error e(ErrorCode::kDanglingTarget, "statement " + std::to_string(from) + " targets a statement outside the body");
      if (body.statements[from]->address) e.address = body.statements[from]->address;
      e.method = body.signature.to_string();
      throw e;
    }
    if (!seen.insert({from, it->second}).second) return;
    cfg.edges.push_back({from, it->second, kind});
    cfg.successors[from].push_back(it->second);
    cfg.predecessors[it->second].push_back(from);
  };
  for (size_t i = 0; i < n; ++i) {
    for (const Flow& f : normal_flow(body, i)) add(i, f.to, f.kind);
    if (with_exceptional_edges) {
      for (Statement* h : handlers_for(body, i, index)) add(i, h, EdgeKind::kExceptional);
    }
  }
  return cfg;
}

}  // namespace dexlift::ir
