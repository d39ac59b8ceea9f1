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

#include "dexlift/ir/validate.h"

#include <set>

#include "dexlift/ir/text.h"

namespace dexlift::ir {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Can a value of type v be stored where `slot` is expected. Unknown on
// either side is not judged here; the typed stage rejects unknown locals
// separately.
bool compatible(const IrType& slot, const IrType& v) {
  if (slot.is_unknown() || v.is_unknown()) return true;
  if (v.tag() == IrType::Tag::kNull) return slot.is_reference_like();
  return slot.category() == v.category();
}

bool is_int_constant(const Immediate& imm) { return std::holds_alternative<IntConstant>(imm); }

class Checker {
 public:
  Checker(const Body& body, Stage stage) : body_(body), stage_(stage), index_(body.index_map()) {}

  std::vector<std::string> run() {
    check_locals();
    check_statements();
    check_traps();
    check_identities();
    if (stage_ != Stage::kLifted) check_types();
    return std::move(out_);
  }

 private:
  void report(size_t i, const std::string& what) {
    out_.push_back("L" + std::to_string(i) + " (" + statement_text(body_, *body_.statements[i], index_) + "): " + what);
  }

  bool in_body(const Statement* s) const { return s != nullptr && index_.count(s) != 0; }

  void check_locals() {
    std::set<std::string> names;
    for (const Local& l : body_.locals) {
      if (!names.insert(l.name).second) out_.push_back("duplicate local name " + l.name);
      if (stage_ != Stage::kLifted) {
        if (l.type.is_unknown()) out_.push_back("local " + l.name + " has unknown type");
        if (l.type.tag() == IrType::Tag::kNull) out_.push_back("local " + l.name + " has null type");
      }
    }
  }

  void check_statements() {
    const size_t n = body_.statements.size();
    for (size_t i = 0; i < n; ++i) {
      const Statement& s = *body_.statements[i];
      for (LocalId id : uses(s)) {
        if (id >= body_.locals.size()) report(i, "references missing local " + std::to_string(id));
      }
      if (auto d = def(s); d && *d >= body_.locals.size()) report(i, "defines missing local");
      for (Statement* const* t : branch_targets(s)) {
        if (!in_body(*t)) report(i, "branch target outside the body");
      }
      if (stage_ == Stage::kOptimized && s.kind() == StmtKind::kNop) report(i, "nop survives optimization");
    }
    if (n > 0 && falls_through(*body_.statements.back())) report(n - 1, "control falls off the end of the body");
    for (const auto& [addr, s] : body_.addr_map) {
      if (!in_body(s)) out_.push_back("addr_map entry " + std::to_string(addr) + " points outside the body");
    }
  }

  void check_traps() {
    for (size_t k = 0; k < body_.traps.size(); ++k) {
      const Trap& t = body_.traps[k];
      const std::string name = "trap " + std::to_string(k);
      if (!in_body(t.first) || !in_body(t.last) || !in_body(t.handler)) {
        out_.push_back(name + " references a statement outside the body");
        continue;
      }
      if (index_.at(t.first) > index_.at(t.last)) out_.push_back(name + " has an empty range");
    }
  }

  void check_identities() {
    std::set<const Statement*> handlers;
    for (const Trap& t : body_.traps) handlers.insert(t.handler);
    size_t prefix_end = 0;
    const size_t n = body_.statements.size();
    if (n > 0 && body_.statements[0]->kind() == StmtKind::kNop) prefix_end = 1;
    while (prefix_end < n) {
      const auto* id = body_.statements[prefix_end]->as<IdentityStmt>();
      if (id == nullptr || id->source == IdentityKind::kCaughtException) break;
      ++prefix_end;
    }
    for (size_t i = prefix_end; i < n; ++i) {
      const auto* id = body_.statements[i]->as<IdentityStmt>();
      if (id == nullptr) continue;
      if (id->source != IdentityKind::kCaughtException) {
        report(i, "parameter identity outside the leading prefix");
      } else if (!handlers.count(body_.statements[i].get())) {
        report(i, "caught-exception identity does not start a handler");
      }
    }
  }

  void expect_type(size_t i, const IrType& slot, const Immediate& v, const std::string& where) {
    const IrType t = type_of(body_, v);
    if (slot.is_reference_like() && is_int_constant(v)) {
      report(i, "integer constant in reference position (" + where + ")");
    } else if (!compatible(slot, t)) {
      report(i, where + ": expected " + slot.to_string() + ", found " + t.to_string());
    }
  }

  void expect_category(size_t i, Category c, const Immediate& v, const std::string& where) {
    expect_type(i, category_type(c), v, where);
  }

  void check_value(size_t i, const Value& v) {
    std::visit(Overloaded{
                   [&](const Immediate&) {},
                   [&](const FieldAccess& f) {
                     if (f.base) expect_category(i, Category::kRef, LocalRef{*f.base}, "field base");
                   },
                   [&](const ArrayAccess& a) {
                     expect_category(i, Category::kRef, LocalRef{a.base}, "array base");
                     expect_category(i, Category::kInt, a.index, "array index");
                   },
                   [&](const BinaryOp& b) {
                     expect_type(i, b.type, b.lhs, "left operand");
                     const bool shift = b.op == BinOp::kShl || b.op == BinOp::kShr || b.op == BinOp::kUshr;
                     expect_type(i, shift ? IrType::int_() : b.type, b.rhs, "right operand");
                   },
                   [&](const UnaryOp& u) { expect_type(i, u.type, u.operand, "operand"); },
                   [&](const Cast& c) {
                     expect_type(i, c.from.is_unknown() ? IrType::object() : c.from, c.operand, "cast operand");
                   },
                   [&](const InstanceOf& o) { expect_category(i, Category::kRef, o.operand, "instanceof operand"); },
                   [&](const New&) {},
                   [&](const NewArray& n) { expect_category(i, Category::kInt, n.size, "array size"); },
                   [&](const Lengthof& l) { expect_category(i, Category::kRef, l.operand, "lengthof operand"); },
                   [&](const Compare& c) {
                     const Category cat = c.kind == CmpKind::kCmpLong                                     ? Category::kLong
                                          : c.kind == CmpKind::kCmplFloat || c.kind == CmpKind::kCmpgFloat ? Category::kFloat
                                                                                                          : Category::kDouble;
                     expect_category(i, cat, c.lhs, "comparison operand");
                     expect_category(i, cat, c.rhs, "comparison operand");
                   },
               },
               v);
  }

  void check_types() {
    const IrType ret = body_.signature.proto.return_type == "V"
                           ? IrType::unknown()
                           : IrType::from_descriptor(body_.signature.proto.return_type);
    for (size_t i = 0; i < body_.statements.size(); ++i) {
      const Statement& s = *body_.statements[i];
      std::visit(
          Overloaded{
              [&](const AssignStmt& a) {
                check_value(i, a.value);
                IrType slot;
                if (const auto* l = std::get_if<LocalRef>(&a.target)) {
                  slot = body_.locals[l->id].type;
                } else if (const auto* f = std::get_if<FieldAccess>(&a.target)) {
                  check_value(i, *f);
                  slot = IrType::from_descriptor(f->field.type);
                } else {
                  const auto& arr = std::get<ArrayAccess>(a.target);
                  check_value(i, arr);
                  slot = array_element_type(body_, arr);
                }
                if (const auto* imm = std::get_if<Immediate>(&a.value)) {
                  expect_type(i, slot, *imm, "assignment");
                } else if (!compatible(slot, type_of(body_, a.value))) {
                  report(i, "assignment: expected " + slot.to_string() + ", found " +
                                type_of(body_, a.value).to_string());
                }
              },
              [&](const IfStmt& c) {
                const IrType l = type_of(body_, c.lhs);
                const IrType r = type_of(body_, c.rhs);
                if (l.is_reference_like() && is_int_constant(c.rhs)) {
                  report(i, "reference compared against an integer constant");
                } else if (!compatible(l, r) && !compatible(r, l)) {
                  report(i, "comparison between " + l.to_string() + " and " + r.to_string());
                }
                if (!l.is_reference_like() && c.op != RelOp::kEq && c.op != RelOp::kNe &&
                    l.category() != Category::kInt && !l.is_unknown()) {
                  report(i, "ordered comparison of a non-int value");
                }
              },
              [&](const TableSwitchStmt& t) { expect_category(i, Category::kInt, t.key, "switch key"); },
              [&](const LookupSwitchStmt& t) { expect_category(i, Category::kInt, t.key, "switch key"); },
              [&](const InvokeStmt& inv) {
                size_t p = 0;
                if (inv.kind != InvokeKind::kStatic) {
                  if (inv.args.empty()) {
                    report(i, "instance call without a receiver");
                    return;
                  }
                  expect_category(i, Category::kRef, inv.args[0], "receiver");
                  p = 1;
                }
                const auto& params = inv.method.proto.parameters;
                if (inv.args.size() - p != params.size()) {
                  report(i, "argument count does not match the signature");
                  return;
                }
                for (size_t k = 0; k < params.size(); ++k) {
                  expect_type(i, IrType::from_descriptor(params[k]), inv.args[p + k],
                              "argument " + std::to_string(k));
                }
                if (inv.result) {
                  const std::string& rt = inv.method.proto.return_type;
                  if (rt == "V") {
                    report(i, "void call result assigned");
                  } else if (!compatible(body_.locals[*inv.result].type, IrType::from_descriptor(rt))) {
                    report(i, "call result stored in a " + body_.locals[*inv.result].type.to_string() + " local");
                  }
                }
              },
              [&](const ReturnStmt& r) {
                if (ret.is_unknown()) {
                  report(i, "value returned from a void method");
                } else {
                  expect_type(i, ret, r.value, "return value");
                }
              },
              [&](const ReturnVoidStmt&) {
                if (!ret.is_unknown()) report(i, "missing return value");
              },
              [&](const ThrowStmt& t) { expect_category(i, Category::kRef, t.value, "thrown value"); },
              [&](const MonitorEnterStmt& m) { expect_category(i, Category::kRef, m.value, "monitor"); },
              [&](const MonitorExitStmt& m) { expect_category(i, Category::kRef, m.value, "monitor"); },
              [&](const auto&) {},
          },
          s.node);
    }
  }

  const Body& body_;
  Stage stage_;
  std::unordered_map<const Statement*, size_t> index_;
  std::vector<std::string> out_;
};

}  // namespace

IrType type_of(const Body& body, const Immediate& imm) {
  return std::visit(Overloaded{
                        [&](const LocalRef& l) {
                          return l.id < body.locals.size() ? body.locals[l.id].type : IrType::unknown();
                        },
                        [](const IntConstant&) { return IrType::int_(); },
                        [](const LongConstant&) { return IrType::long_(); },
                        [](const FloatConstant&) { return IrType::float_(); },
                        [](const DoubleConstant&) { return IrType::double_(); },
                        [](const NullConstant&) { return IrType::null(); },
                        [](const StringConstant&) { return IrType::ref("Ljava/lang/String;"); },
                        [](const ClassConstant&) { return IrType::ref("Ljava/lang/Class;"); },
                    },
                    imm);
}

IrType array_element_type(const Body& body, const ArrayAccess& a) {
  if (a.base < body.locals.size()) {
    const IrType& t = body.locals[a.base].type;
    if (t.tag() == IrType::Tag::kArray) return t.element();
  }
  switch (a.kind) {
    case ArrayKind::kObject: return IrType::object();
    case ArrayKind::kBoolean: return IrType::boolean();
    case ArrayKind::kByte: return IrType::byte();
    case ArrayKind::kChar: return IrType::char_();
    case ArrayKind::kShort: return IrType::short_();
    case ArrayKind::kWord:
    case ArrayKind::kWide: break;
  }
  return IrType::unknown();
}

IrType type_of(const Body& body, const Value& value) {
  return std::visit(Overloaded{
                        [&](const Immediate& i) { return type_of(body, i); },
                        [](const FieldAccess& f) { return IrType::from_descriptor(f.field.type); },
                        [&](const ArrayAccess& a) { return array_element_type(body, a); },
                        [&](const BinaryOp& b) { return b.type.is_unknown() ? type_of(body, b.lhs) : b.type; },
                        [&](const UnaryOp& u) { return u.type.is_unknown() ? type_of(body, u.operand) : u.type; },
                        [](const Cast& c) { return c.to; },
                        [](const InstanceOf&) { return IrType::boolean(); },
                        [](const New& n) { return IrType::ref(n.descriptor); },
                        [](const NewArray& n) { return n.type; },
                        [](const Lengthof&) { return IrType::int_(); },
                        [](const Compare&) { return IrType::int_(); },
                    },
                    value);
}

std::vector<std::string> validate(const Body& body, Stage stage) { return Checker(body, stage).run(); }

}  // namespace dexlift::ir
