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

#include "dexlift/passes/passes.h"

#include <functional>
#include <unordered_map>

#include "dexlift/error.h"
#include "dexlift/ir/validate.h"
#include "dexlift/typing/typing.h"

namespace dexlift::passes {
namespace {

using ir::LocalId;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Remap = std::function<LocalId(LocalId)>;

void remap(ir::Immediate& imm, const Remap& f) {
  if (auto* l = std::get_if<ir::LocalRef>(&imm)) l->id = f(l->id);
}

void remap(ir::FieldAccess& fa, const Remap& f) {
  if (fa.base) fa.base = f(*fa.base);
}

void remap(ir::ArrayAccess& a, const Remap& f) {
  a.base = f(a.base);
  remap(a.index, f);
}

void remap(ir::Value& v, const Remap& f) {
  std::visit(Overloaded{
                 [&](ir::Immediate& i) { remap(i, f); },
                 [&](ir::FieldAccess& fa) { remap(fa, f); },
                 [&](ir::ArrayAccess& a) { remap(a, f); },
                 [&](ir::BinaryOp& b) {
                   remap(b.lhs, f);
                   remap(b.rhs, f);
                 },
                 [&](ir::UnaryOp& u) { remap(u.operand, f); },
                 [&](ir::Cast& c) { remap(c.operand, f); },
                 [&](ir::InstanceOf& i) { remap(i.operand, f); },
                 [&](ir::New&) {},
                 [&](ir::NewArray& n) { remap(n.size, f); },
                 [&](ir::Lengthof& l) { remap(l.operand, f); },
                 [&](ir::Compare& c) {
                   remap(c.lhs, f);
                   remap(c.rhs, f);
                 },
             },
             v);
}

void remap(ir::Statement& s, const Remap& f) {
  std::visit(Overloaded{
                 [&](ir::IdentityStmt& i) { i.target = f(i.target); },
                 [&](ir::AssignStmt& a) {
                   std::visit(Overloaded{
                                  [&](ir::LocalRef& l) { l.id = f(l.id); },
                                  [&](ir::FieldAccess& fa) { remap(fa, f); },
                                  [&](ir::ArrayAccess& arr) { remap(arr, f); },
                              },
                              a.target);
                   remap(a.value, f);
                 },
                 [&](ir::IfStmt& i) {
                   remap(i.lhs, f);
                   remap(i.rhs, f);
                 },
                 [&](ir::TableSwitchStmt& t) { remap(t.key, f); },
                 [&](ir::LookupSwitchStmt& l) { remap(l.key, f); },
                 [&](ir::InvokeStmt& inv) {
                   for (auto& a : inv.args) remap(a, f);
                   if (inv.result) inv.result = f(*inv.result);
                 },
                 [&](ir::ReturnStmt& r) { remap(r.value, f); },
                 [&](ir::ThrowStmt& t) { remap(t.value, f); },
                 [&](ir::MonitorEnterStmt& m) { remap(m.value, f); },
                 [&](ir::MonitorExitStmt& m) { remap(m.value, f); },
                 [&](auto&) {},
             },
             s.node);
}

}  // namespace

void eliminate_nops(ir::Body& body) {
  const size_t n = body.statements.size();
  // next_real[i]: first non-Nop at or after i; prev_real[i]: last at or before.
  std::vector<ir::Statement*> next_real(n + 1, nullptr), prev_real(n, nullptr);
  for (size_t i = n; i-- > 0;) {
    ir::Statement* s = body.statements[i].get();
    next_real[i] = s->kind() == ir::StmtKind::kNop ? next_real[i + 1] : s;
  }
  for (size_t i = 0; i < n; ++i) {
    ir::Statement* s = body.statements[i].get();
    prev_real[i] = s->kind() == ir::StmtKind::kNop ? (i > 0 ? prev_real[i - 1] : nullptr) : s;
  }
  std::unordered_map<const ir::Statement*, size_t> index = body.index_map();
  // A trailing Nop has nowhere to go; it stays.
  auto removable = [&](const ir::Statement* s) {
    return s->kind() == ir::StmtKind::kNop && next_real[index.at(s)] != nullptr;
  };
  auto forward = [&](ir::Statement* s) -> ir::Statement* {
    auto it = index.find(s);
    if (it == index.end() || !removable(s)) return s;
    return next_real[it->second];
  };

  for (auto& s : body.statements) {
    for (ir::Statement** t : ir::branch_targets(*s)) *t = forward(*t);
  }
  std::vector<ir::Trap> traps;
  for (ir::Trap t : body.traps) {
    const size_t first = index.at(t.first);
    const size_t last = index.at(t.last);
    ir::Statement* nf = removable(t.first) ? next_real[first] : t.first;
    ir::Statement* nl = removable(t.last) ? prev_real[last] : t.last;
    t.handler = forward(t.handler);
    if (nf == nullptr || nl == nullptr || index.at(nf) > index.at(nl)) continue;
    t.first = nf;
    t.last = nl;
    traps.push_back(t);
  }
  body.traps = std::move(traps);
  for (auto& [addr, s] : body.addr_map) s = forward(s);

  std::vector<std::unique_ptr<ir::Statement>> kept;
  kept.reserve(n);
  for (auto& s : body.statements) {
    if (!removable(s.get())) kept.push_back(std::move(s));
  }
  body.statements = std::move(kept);
}

void remove_unused_locals(ir::Body& body) {
  std::vector<bool> used(body.locals.size(), false);
  for (const auto& s : body.statements) {
    for (LocalId l : ir::uses(*s)) {
      if (l < used.size()) used[l] = true;
    }
    if (auto d = ir::def(*s); d && *d < used.size()) used[*d] = true;
  }
  std::vector<LocalId> renumber(body.locals.size(), 0);
  std::vector<ir::Local> kept;
  for (size_t l = 0; l < body.locals.size(); ++l) {
    if (!used[l]) continue;
    renumber[l] = static_cast<LocalId>(kept.size());
    kept.push_back(std::move(body.locals[l]));
  }
  if (kept.size() == body.locals.size()) {
    body.locals = std::move(kept);
    return;
  }
  body.locals = std::move(kept);
  const Remap f = [&](LocalId l) { return l < renumber.size() ? renumber[l] : l; };
  for (auto& s : body.statements) remap(*s, f);
}

bool PipelineReport::clean() const {
  for (const auto& s : stages) {
    if (!s.violations.empty()) return false;
  }
  return true;
}

PipelineReport run_pipeline(ir::Body& body, const PipelineOptions& options) {
  PipelineReport report;
  ir::Body work = body.clone();
  std::vector<typing::AmbiguousDeclaration> decls;
  std::vector<ir::IrType> resolved;

  auto stage = [&](const char* name, ir::Stage level, const std::function<void()>& step) {
    const auto start = std::chrono::steady_clock::now();
    step();
    StageReport r{name, std::chrono::steady_clock::now() - start, {}};
    if (options.validate) r.violations = ir::validate(work, level);
    report.stages.push_back(std::move(r));
  };

  try {
    stage("infer", ir::Stage::kLifted, [&] { typing::propagate_types(work); });
    stage("resolve", ir::Stage::kLifted, [&] {
      decls = typing::find_ambiguous_declarations(work);
      resolved = typing::resolve_all_ambiguous(work, decls);
    });
    stage("rewrite", ir::Stage::kLifted, [&] {
      for (size_t i = 0; i < decls.size(); ++i) typing::rewrite_constant(decls[i], resolved[i]);
      typing::finalize_types(work);
    });
    stage("fix-comparisons", ir::Stage::kTyped, [&] { typing::fix_zero_comparisons(work); });
    if (options.optimize) {
      stage("eliminate-nops", ir::Stage::kOptimized, [&] { eliminate_nops(work); });
      stage("remove-unused-locals", ir::Stage::kOptimized, [&] { remove_unused_locals(work); });
    }
  } catch (Error& e) {
    if (e.method.empty()) e.method = body.signature.to_string();
    throw;
  }
  body = std::move(work);
  return report;
}

}  // namespace dexlift::passes
