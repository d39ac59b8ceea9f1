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

#include "dexlift/ir/ir.h"

namespace dexlift::ir {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void add_use(const Immediate& imm, std::vector<LocalId>& out) {
  if (const auto* l = std::get_if<LocalRef>(&imm)) out.push_back(l->id);
}

void value_uses(const Value& v, std::vector<LocalId>& out) {
  std::visit(Overloaded{
                 [&](const Immediate& i) { add_use(i, out); },
                 [&](const FieldAccess& f) {
                   if (f.base) out.push_back(*f.base);
                 },
                 [&](const ArrayAccess& a) {
                   out.push_back(a.base);
                   add_use(a.index, out);
                 },
                 [&](const BinaryOp& b) {
                   add_use(b.lhs, out);
                   add_use(b.rhs, out);
                 },
                 [&](const UnaryOp& u) { add_use(u.operand, out); },
                 [&](const Cast& c) { add_use(c.operand, out); },
                 [&](const InstanceOf& i) { add_use(i.operand, out); },
                 [&](const New&) {},
                 [&](const NewArray& n) { add_use(n.size, out); },
                 [&](const Lengthof& l) { add_use(l.operand, out); },
                 [&](const Compare& c) {
                   add_use(c.lhs, out);
                   add_use(c.rhs, out);
                 },
             },
             v);
}

bool value_can_throw(const Value& v) {
  return std::visit(Overloaded{
                        [](const Immediate&) { return false; },
                        [](const FieldAccess&) { return true; },
                        [](const ArrayAccess&) { return true; },
                        [](const BinaryOp& b) {
                          const bool integral = b.type.category() == Category::kInt ||
                                                b.type.category() == Category::kLong;
                          return integral && (b.op == BinOp::kDiv || b.op == BinOp::kRem);
                        },
                        [](const UnaryOp&) { return false; },
                        [](const Cast& c) { return c.from.is_unknown(); },
                        [](const InstanceOf&) { return false; },
                        [](const New&) { return true; },
                        [](const NewArray&) { return true; },
                        [](const Lengthof&) { return true; },
                        [](const Compare&) { return false; },
                    },
                    v);
}

}  // namespace

std::string_view stmt_kind_name(StmtKind kind) {
  switch (kind) {
    case StmtKind::kNop: return "nop";
    case StmtKind::kIdentity: return "identity";
    case StmtKind::kAssign: return "assign";
    case StmtKind::kIf: return "if";
    case StmtKind::kGoto: return "goto";
    case StmtKind::kTableSwitch: return "tableswitch";
    case StmtKind::kLookupSwitch: return "lookupswitch";
    case StmtKind::kInvoke: return "invoke";
    case StmtKind::kReturn: return "return";
    case StmtKind::kReturnVoid: return "return-void";
    case StmtKind::kThrow: return "throw";
    case StmtKind::kMonitorEnter: return "entermonitor";
    case StmtKind::kMonitorExit: return "exitmonitor";
    case StmtKind::kBreakpoint: return "breakpoint";
  }
  return "?";
}

LocalId Body::add_local(std::string name, IrType type) {
  locals.push_back({std::move(name), std::move(type)});
  return static_cast<LocalId>(locals.size() - 1);
}

Statement* Body::append(StmtNode node, std::optional<uint32_t> address) {
  statements.push_back(std::make_unique<Statement>(Statement{std::move(node), address}));
  return statements.back().get();
}

std::unordered_map<const Statement*, size_t> Body::index_map() const {
  std::unordered_map<const Statement*, size_t> out;
  out.reserve(statements.size());
  for (size_t i = 0; i < statements.size(); ++i) out.emplace(statements[i].get(), i);
  return out;
}

Body Body::clone() const {
  Body copy;
  copy.signature = signature;
  copy.is_static = is_static;
  copy.locals = locals;
  std::unordered_map<const Statement*, Statement*> remap;
  for (const auto& s : statements) {
    copy.statements.push_back(std::make_unique<Statement>(*s));
    remap[s.get()] = copy.statements.back().get();
  }
  auto fix = [&](Statement*& p) {
    if (p == nullptr) return;
    auto it = remap.find(p);
    // Pointers outside the body are kept as is so validation still sees them.
    if (it != remap.end()) p = it->second;
  };
  for (auto& s : copy.statements) {
    for (Statement** t : branch_targets(*s)) fix(*t);
  }
  for (Trap t : traps) {
    fix(t.first);
    fix(t.last);
    fix(t.handler);
    copy.traps.push_back(t);
  }
  for (auto [addr, s] : addr_map) {
    fix(s);
    copy.addr_map.emplace(addr, s);
  }
  return copy;
}

std::vector<Statement**> branch_targets(Statement& s) {
  std::vector<Statement**> out;
  if (auto* i = s.as<IfStmt>()) out.push_back(&i->target);
  if (auto* g = s.as<GotoStmt>()) out.push_back(&g->target);
  if (auto* t = s.as<TableSwitchStmt>()) {
    for (auto& p : t->targets) out.push_back(&p);
    out.push_back(&t->default_target);
  }
  if (auto* l = s.as<LookupSwitchStmt>()) {
    for (auto& p : l->targets) out.push_back(&p);
    out.push_back(&l->default_target);
  }
  return out;
}

std::vector<Statement* const*> branch_targets(const Statement& s) {
  std::vector<Statement* const*> out;
  for (Statement** p : branch_targets(const_cast<Statement&>(s))) out.push_back(p);
  return out;
}

std::vector<LocalId> uses(const Statement& s) {
  std::vector<LocalId> out;
  std::visit(Overloaded{
                 [&](const AssignStmt& a) {
                   if (const auto* f = std::get_if<FieldAccess>(&a.target)) {
                     if (f->base) out.push_back(*f->base);
                   } else if (const auto* arr = std::get_if<ArrayAccess>(&a.target)) {
                     out.push_back(arr->base);
                     add_use(arr->index, out);
                   }
                   value_uses(a.value, out);
                 },
                 [&](const IfStmt& i) {
                   add_use(i.lhs, out);
                   add_use(i.rhs, out);
                 },
                 [&](const TableSwitchStmt& t) { add_use(t.key, out); },
                 [&](const LookupSwitchStmt& l) { add_use(l.key, out); },
                 [&](const InvokeStmt& inv) {
                   for (const auto& a : inv.args) add_use(a, out);
                 },
                 [&](const ReturnStmt& r) { add_use(r.value, out); },
                 [&](const ThrowStmt& t) { add_use(t.value, out); },
                 [&](const MonitorEnterStmt& m) { add_use(m.value, out); },
                 [&](const MonitorExitStmt& m) { add_use(m.value, out); },
                 [&](const auto&) {},
             },
             s.node);
  return out;
}

std::optional<LocalId> def(const Statement& s) {
  if (const auto* a = s.as<AssignStmt>()) {
    if (const auto* l = std::get_if<LocalRef>(&a->target)) return l->id;
    return std::nullopt;
  }
  if (const auto* i = s.as<IdentityStmt>()) return i->target;
  if (const auto* inv = s.as<InvokeStmt>()) return inv->result;
  return std::nullopt;
}

bool can_throw(const Statement& s) {
  switch (s.kind()) {
    case StmtKind::kAssign: {
      const auto& a = *s.as<AssignStmt>();
      return !std::holds_alternative<LocalRef>(a.target) || value_can_throw(a.value);
    }
    case StmtKind::kInvoke:
    case StmtKind::kThrow:
    case StmtKind::kMonitorEnter:
    case StmtKind::kMonitorExit: return true;
    default: return false;
  }
}

bool falls_through(const Statement& s) {
  switch (s.kind()) {
    case StmtKind::kGoto:
    case StmtKind::kTableSwitch:
    case StmtKind::kLookupSwitch:
    case StmtKind::kReturn:
    case StmtKind::kReturnVoid:
    case StmtKind::kThrow: return false;
    default: return true;
  }
}

}  // namespace dexlift::ir
