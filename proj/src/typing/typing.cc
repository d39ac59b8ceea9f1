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

#include "dexlift/typing/typing.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "dexlift/error.h"
#include "dexlift/ir/cfg.h"
#include "dexlift/ir/text.h"

namespace dexlift::typing {
namespace {

using ir::Body;
using ir::Immediate;
using ir::IrType;
using ir::LocalId;
using ir::Statement;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const IrType kThrowable = IrType::ref("Ljava/lang/Throwable;");

// Null counts as a reference for conflict purposes.
ir::Category category_of(const IrType& t) { return t.category(); }

bool same_category(const IrType& a, const IrType& b) { return category_of(a) == category_of(b); }

// Least upper bound within one category.
IrType join(const IrType& a, const IrType& b) {
  if (a.is_unknown()) return b;
  if (b.is_unknown() || a == b) return a;
  if (a.tag() == IrType::Tag::kNull) return b;
  if (b.tag() == IrType::Tag::kNull) return a;
  if (a.is_integral() && b.is_integral()) return IrType::int_();
  if (a.is_reference_like() && b.is_reference_like()) return IrType::object();
  return a;
}

[[noreturn]] void raise(ErrorCode code, const Body& body, const Statement* at, const std::string& msg) {
  Error e(code, msg);
  e.method = body.signature.to_string();
  if (at != nullptr && at->address) e.address = *at->address;
  throw e;
}

std::string where(const Statement* s) {
  if (s == nullptr || !s->address) return "entry";
  std::ostringstream out;
  out << "0x" << std::hex << *s->address;
  return out.str();
}

struct LocalEvidence {
  LocalId local;
  TypeEvidence evidence;
};

class EvidenceCollector {
 public:
  EvidenceCollector(const Body& body, const std::vector<IrType>& types, const Statement& s)
      : body_(body), types_(types), s_(s) {}

  std::vector<LocalEvidence> run() {
    std::visit(Overloaded{
                   [&](const ir::IdentityStmt& id) { identity(id); },
                   [&](const ir::AssignStmt& a) { assign(a); },
                   [&](const ir::TableSwitchStmt& t) { use(t.key, IrType::int_(), EvidenceKind::kTypedOperation); },
                   [&](const ir::LookupSwitchStmt& l) { use(l.key, IrType::int_(), EvidenceKind::kTypedOperation); },
                   [&](const ir::InvokeStmt& inv) { invoke(inv); },
                   [&](const ir::ReturnStmt& r) {
                     use(r.value, IrType::from_descriptor(body_.signature.proto.return_type), EvidenceKind::kReturn);
                   },
                   [&](const ir::ThrowStmt& t) { use(t.value, kThrowable, EvidenceKind::kTypedOperation); },
                   [&](const ir::MonitorEnterStmt& m) {
                     use(m.value, IrType::object(), EvidenceKind::kTypedOperation);
                   },
                   [&](const ir::MonitorExitStmt& m) {
                     use(m.value, IrType::object(), EvidenceKind::kTypedOperation);
                   },
                   [&](const auto&) {},
               },
               s_.node);
    return std::move(out_);
  }

 private:
  IrType type(LocalId l) const { return l < types_.size() ? types_[l] : IrType::unknown(); }

  void add(LocalId l, const IrType& t, EvidenceKind kind, bool is_def) {
    if (t.is_unknown()) return;
    out_.push_back({l, TypeEvidence{&s_, kind, t, is_def}});
  }
  void use(const Immediate& imm, const IrType& t, EvidenceKind kind) {
    if (const auto* l = std::get_if<ir::LocalRef>(&imm)) add(l->id, t, kind, false);
  }
  void use_local(LocalId l, const IrType& t, EvidenceKind kind) { add(l, t, kind, false); }
  void define(LocalId l, const IrType& t) { add(l, t, EvidenceKind::kDefinition, true); }

  IrType element_type(const ir::ArrayAccess& a) const {
    const IrType base = type(a.base);
    if (base.tag() == IrType::Tag::kArray) return base.element();
    switch (a.kind) {
      case ir::ArrayKind::kBoolean: return IrType::boolean();
      case ir::ArrayKind::kByte: return IrType::byte();
      case ir::ArrayKind::kChar: return IrType::char_();
      case ir::ArrayKind::kShort: return IrType::short_();
      default: return IrType::unknown();
    }
  }
  IrType array_base_type(const ir::ArrayAccess& a) const {
    switch (a.kind) {
      case ir::ArrayKind::kBoolean: return IrType::array_of(IrType::boolean());
      case ir::ArrayKind::kByte: return IrType::array_of(IrType::byte());
      case ir::ArrayKind::kChar: return IrType::array_of(IrType::char_());
      case ir::ArrayKind::kShort: return IrType::array_of(IrType::short_());
      default: return IrType::object();
    }
  }
  void array_operands(const ir::ArrayAccess& a) {
    use_local(a.base, array_base_type(a), EvidenceKind::kTypedOperation);
    use(a.index, IrType::int_(), EvidenceKind::kTypedOperation);
  }

  void identity(const ir::IdentityStmt& id) {
    switch (id.source) {
      case ir::IdentityKind::kThis: define(id.target, IrType::from_descriptor(body_.signature.owner)); break;
      case ir::IdentityKind::kParameter: {
        const auto& params = body_.signature.proto.parameters;
        if (id.parameter < params.size()) define(id.target, IrType::from_descriptor(params[id.parameter]));
        break;
      }
      case ir::IdentityKind::kCaughtException: {
        std::optional<IrType> t;
        for (const auto& trap : body_.traps) {
          if (trap.handler != &s_) continue;
          const IrType here = trap.exception_type ? IrType::ref(*trap.exception_type) : kThrowable;
          t = !t || *t == here ? here : kThrowable;
        }
        define(id.target, t.value_or(kThrowable));
        break;
      }
    }
  }

  void assign(const ir::AssignStmt& a) {
    std::optional<LocalId> target;
    if (const auto* l = std::get_if<ir::LocalRef>(&a.target)) target = l->id;
    IrType stored = IrType::unknown();  // type a store target expects
    EvidenceKind store_kind = EvidenceKind::kDefinition;
    if (const auto* f = std::get_if<ir::FieldAccess>(&a.target)) {
      if (f->base) use_local(*f->base, IrType::from_descriptor(f->field.owner), EvidenceKind::kFieldStore);
      stored = IrType::from_descriptor(f->field.type);
      store_kind = EvidenceKind::kFieldStore;
    } else if (const auto* arr = std::get_if<ir::ArrayAccess>(&a.target)) {
      array_operands(*arr);
      stored = element_type(*arr);
      store_kind = EvidenceKind::kArrayStore;
    }
    auto def = [&](const IrType& t) {
      if (target) define(*target, t);
    };
    std::visit(Overloaded{
                   [&](const Immediate& imm) {
                     std::visit(Overloaded{
                                    [&](const ir::LocalRef& src) {
                                      if (target) {
                                        def(type(src.id));
                                        use_local(src.id, type(*target), EvidenceKind::kDefinition);
                                      } else {
                                        use_local(src.id, stored, store_kind);
                                      }
                                    },
                                    [&](const ir::IntConstant&) {
                                      if (!a.provisional) def(IrType::int_());
                                    },
                                    [&](const ir::LongConstant&) {
                                      if (!a.provisional) def(IrType::long_());
                                    },
                                    [&](const ir::FloatConstant&) { def(IrType::float_()); },
                                    [&](const ir::DoubleConstant&) { def(IrType::double_()); },
                                    [&](const ir::NullConstant&) { def(IrType::null()); },
                                    [&](const ir::StringConstant&) { def(IrType::ref("Ljava/lang/String;")); },
                                    [&](const ir::ClassConstant&) { def(IrType::ref("Ljava/lang/Class;")); },
                                },
                                imm);
                   },
                   [&](const ir::FieldAccess& f) {
                     if (f.base) use_local(*f.base, IrType::from_descriptor(f.field.owner), EvidenceKind::kTypedOperation);
                     def(IrType::from_descriptor(f.field.type));
                   },
                   [&](const ir::ArrayAccess& arr) {
                     array_operands(arr);
                     def(element_type(arr));
                   },
                   [&](const ir::BinaryOp& b) {
                     const bool shift =
                         b.op == ir::BinOp::kShl || b.op == ir::BinOp::kShr || b.op == ir::BinOp::kUshr;
                     use(b.lhs, b.type, EvidenceKind::kTypedOperation);
                     use(b.rhs, shift ? IrType::int_() : b.type, EvidenceKind::kTypedOperation);
                     def(b.type);
                   },
                   [&](const ir::UnaryOp& u) {
                     use(u.operand, u.type, EvidenceKind::kTypedOperation);
                     def(u.type);
                   },
                   [&](const ir::Cast& c) {
                     use(c.operand, c.from.is_unknown() ? IrType::object() : c.from, EvidenceKind::kTypedOperation);
                     def(c.to);
                   },
                   [&](const ir::InstanceOf& i) {
                     use(i.operand, IrType::object(), EvidenceKind::kTypedOperation);
                     def(IrType::boolean());
                   },
                   [&](const ir::New& n) { def(IrType::ref(n.descriptor)); },
                   [&](const ir::NewArray& n) {
                     use(n.size, IrType::int_(), EvidenceKind::kTypedOperation);
                     def(n.type);
                   },
                   [&](const ir::Lengthof& l) {
                     use(l.operand, IrType::object(), EvidenceKind::kTypedOperation);
                     def(IrType::int_());
                   },
                   [&](const ir::Compare& c) {
                     IrType t = IrType::long_();
                     if (c.kind == ir::CmpKind::kCmplFloat || c.kind == ir::CmpKind::kCmpgFloat) t = IrType::float_();
                     if (c.kind == ir::CmpKind::kCmplDouble || c.kind == ir::CmpKind::kCmpgDouble) {
                       t = IrType::double_();
                     }
                     use(c.lhs, t, EvidenceKind::kTypedOperation);
                     use(c.rhs, t, EvidenceKind::kTypedOperation);
                     def(IrType::int_());
                   },
               },
               a.value);
  }

  void invoke(const ir::InvokeStmt& inv) {
    size_t k = 0;
    if (inv.kind != ir::InvokeKind::kStatic && !inv.args.empty()) {
      use(inv.args[k++], IrType::from_descriptor(inv.method.owner), EvidenceKind::kInvocationArgument);
    }
    for (const auto& p : inv.method.proto.parameters) {
      if (k >= inv.args.size()) break;
      use(inv.args[k++], IrType::from_descriptor(p), EvidenceKind::kInvocationArgument);
    }
    if (inv.result) define(*inv.result, IrType::from_descriptor(inv.method.proto.return_type));
  }

  const Body& body_;
  const std::vector<IrType>& types_;
  const Statement& s_;
  std::vector<LocalEvidence> out_;
};

std::vector<LocalEvidence> all_evidence(const Body& body, const std::vector<IrType>& types, const Statement& s) {
  return EvidenceCollector(body, types, s).run();
}

// Locals a statement mentions, deduplicated.
std::vector<LocalId> mentioned(const Statement& s) {
  std::vector<LocalId> out = ir::uses(s);
  if (auto d = ir::def(s)) out.push_back(*d);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Fixpoint over all statements. Seeds add definition evidence for locals
// whose ambiguous constants are already resolved.
std::vector<IrType> fixpoint(const Body& body, const std::map<LocalId, IrType>& seeds) {
  const size_t nl = body.locals.size();
  const size_t ns = body.statements.size();
  std::vector<IrType> types(nl, IrType::unknown());
  std::vector<std::vector<size_t>> mentions(nl);
  std::vector<std::vector<LocalId>> locals_of(ns);
  std::vector<std::vector<LocalEvidence>> cache(ns);
  for (size_t i = 0; i < ns; ++i) {
    locals_of[i] = mentioned(*body.statements[i]);
    for (LocalId l : locals_of[i]) {
      if (l < nl) mentions[l].push_back(i);
    }
    cache[i] = all_evidence(body, types, *body.statements[i]);
  }

  auto combine = [&](LocalId l) {
    IrType defs = IrType::unknown();
    IrType uses = IrType::unknown();
    const TypeEvidence* first = nullptr;
    if (auto it = seeds.find(l); it != seeds.end()) defs = it->second;
    for (size_t i : mentions[l]) {
      for (const auto& le : cache[i]) {
        if (le.local != l) continue;
        const TypeEvidence& ev = le.evidence;
        const IrType& seen = !defs.is_unknown() ? defs : uses;
        const IrType known = first != nullptr ? first->type : seen;
        if (!known.is_unknown() && !same_category(known, ev.type)) {
          std::ostringstream msg;
          msg << "local " << body.locals[l].name << " is " << known.to_string();
          if (first != nullptr) msg << " (" << evidence_kind_name(first->kind) << " at " << where(first->source) << ")";
          msg << " but " << ev.type.to_string() << " (" << evidence_kind_name(ev.kind) << " at "
              << where(ev.source) << ")";
          raise(ErrorCode::kTypeConflict, body, ev.source, msg.str());
        }
        if (first == nullptr) first = &ev;
        if (ev.is_definition) {
          defs = join(defs, ev.type);
        } else {
          uses = join(uses, ev.type);
        }
      }
    }
    // null only says "some reference"; a typed use is more precise.
    if (defs.is_unknown() || (defs == IrType::null() && !uses.is_unknown())) return uses;
    return defs;
  };

  std::deque<LocalId> work;
  std::vector<bool> queued(nl, true);
  for (LocalId l = 0; l < nl; ++l) work.push_back(l);
  // Types only climb within a category, so this cap is never reached on
  // legal input; it guards against pathological oscillation.
  size_t budget = 16 * (nl + ns) + 64;
  while (!work.empty() && budget-- > 0) {
    const LocalId l = work.front();
    work.pop_front();
    queued[l] = false;
    const IrType t = combine(l);
    if (t == types[l]) continue;
    types[l] = t;
    for (size_t i : mentions[l]) {
      cache[i] = all_evidence(body, types, *body.statements[i]);
      for (LocalId m : locals_of[i]) {
        if (m < nl && !queued[m]) {
          queued[m] = true;
          work.push_back(m);
        }
      }
    }
  }
  return types;
}

std::optional<uint64_t> provisional_bits(const Statement& s, ConstWidth* width, LocalId* local) {
  const auto* a = s.as<ir::AssignStmt>();
  if (a == nullptr || !a->provisional) return std::nullopt;
  const auto* l = std::get_if<ir::LocalRef>(&a->target);
  const auto* imm = std::get_if<Immediate>(&a->value);
  if (l == nullptr || imm == nullptr) return std::nullopt;
  *local = l->id;
  if (const auto* i = std::get_if<ir::IntConstant>(imm)) {
    *width = ConstWidth::k32;
    return static_cast<uint32_t>(i->value);
  }
  if (const auto* w = std::get_if<ir::LongConstant>(imm)) {
    *width = ConstWidth::k64;
    return static_cast<uint64_t>(w->value);
  }
  return std::nullopt;
}

IrType default_type(ConstWidth w) { return w == ConstWidth::k32 ? IrType::int_() : IrType::long_(); }

IrType pick(const Body& body, const AmbiguousDeclaration& decl, const Resolution& r) {
  if (r.evidence) return r.evidence->type;
  const IrType& t = body.locals[decl.local].type;
  if (!t.is_unknown()) return t;
  return default_type(decl.width);
}

// Sign- or zero-extends raw array-data bits to the element type.
Immediate element_constant(const IrType& element, ir::ArrayKind kind, const Immediate& raw) {
  uint64_t bits = 0;
  if (const auto* i = std::get_if<ir::IntConstant>(&raw)) bits = static_cast<uint32_t>(i->value);
  if (const auto* l = std::get_if<ir::LongConstant>(&raw)) bits = static_cast<uint64_t>(l->value);
  IrType t = element;
  if (t.is_unknown() || t.is_reference_like()) {
    switch (kind) {
      case ir::ArrayKind::kByte: t = IrType::byte(); break;
      case ir::ArrayKind::kShort: t = IrType::short_(); break;
      case ir::ArrayKind::kWide: t = IrType::long_(); break;
      default: t = IrType::int_(); break;
    }
  }
  switch (t.tag()) {
    case IrType::Tag::kByte: return ir::IntConstant{static_cast<int8_t>(bits)};
    case IrType::Tag::kShort: return ir::IntConstant{static_cast<int16_t>(bits)};
    case IrType::Tag::kChar: return ir::IntConstant{static_cast<int32_t>(bits & 0xffff)};
    case IrType::Tag::kBoolean: return ir::IntConstant{static_cast<int32_t>(bits & 0xff)};
    case IrType::Tag::kFloat: return ir::FloatConstant{static_cast<uint32_t>(bits)};
    case IrType::Tag::kLong: return ir::LongConstant{static_cast<int64_t>(bits)};
    case IrType::Tag::kDouble: return ir::DoubleConstant{bits};
    default: return ir::IntConstant{static_cast<int32_t>(static_cast<uint32_t>(bits))};
  }
}

std::vector<IrType> current_types(const Body& body) {
  std::vector<IrType> types;
  types.reserve(body.locals.size());
  for (const auto& l : body.locals) types.push_back(l.type);
  return types;
}

}  // namespace

std::string_view evidence_kind_name(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::kDefinition: return "definition";
    case EvidenceKind::kComparison: return "comparison-with-known-type";
    case EvidenceKind::kTypedOperation: return "type-specific-op";
    case EvidenceKind::kReturn: return "non-void-return";
    case EvidenceKind::kInvocationArgument: return "invocation-argument";
    case EvidenceKind::kFieldStore: return "field-store";
    case EvidenceKind::kArrayStore: return "array-store";
  }
  return "?";
}

std::vector<TypeEvidence> statement_evidence(const Body& body, const std::vector<IrType>& types,
                                             const Statement& s, LocalId local) {
  std::vector<TypeEvidence> out;
  for (auto& le : all_evidence(body, types, s)) {
    if (le.local == local) out.push_back(std::move(le.evidence));
  }
  return out;
}

void propagate_types(Body& body) {
  const auto types = fixpoint(body, {});
  for (size_t l = 0; l < types.size(); ++l) body.locals[l].type = types[l];
}

std::vector<AmbiguousDeclaration> find_ambiguous_declarations(const Body& body) {
  std::vector<AmbiguousDeclaration> out;
  for (const auto& sp : body.statements) {
    ConstWidth width = ConstWidth::k32;
    LocalId local = 0;
    const auto bits = provisional_bits(*sp, &width, &local);
    if (!bits || local >= body.locals.size()) continue;
    const IrType& t = body.locals[local].type;
    const ir::Category natural = width == ConstWidth::k32 ? ir::Category::kInt : ir::Category::kLong;
    if (!t.is_unknown() && t.category() == natural) continue;
    AmbiguousDeclaration d{sp.get(), local, width, *bits, {}};
    if (width == ConstWidth::k64) {
      d.candidates = {IrType::long_(), IrType::double_()};
    } else if (*bits == 0) {
      d.candidates = {IrType::int_(), IrType::float_(), IrType::null()};
    } else {
      d.candidates = {IrType::int_(), IrType::float_()};
    }
    out.push_back(std::move(d));
  }
  return out;
}

Resolution search_evidence(const Body& body, const std::vector<IrType>& types, const AmbiguousDeclaration& decl) {
  auto known = [&](LocalId l) { return l < types.size() ? types[l] : IrType::unknown(); };
  Resolution r;
  std::vector<TypeEvidence> found;
  // Locals holding the constant on the current path: the declared local and
  // its copies into still untyped locals.
  using Aliases = std::vector<LocalId>;
  auto holds = [](const Aliases& a, LocalId l) { return std::find(a.begin(), a.end(), l) != a.end(); };

  // Evidence about alias v at s, which reads it.
  auto evidence_for = [&](const Statement& s, LocalId v, const Aliases& aliases) -> std::optional<TypeEvidence> {
    for (auto& ev : statement_evidence(body, types, s, v)) {
      if (!ev.is_definition) return ev;
    }
    if (const auto* i = s.as<ir::IfStmt>()) {
      const auto* l = std::get_if<ir::LocalRef>(&i->lhs);
      const auto* rr = std::get_if<ir::LocalRef>(&i->rhs);
      const ir::LocalRef* other = (l != nullptr && l->id == v) ? rr : l;
      if (other != nullptr && !holds(aliases, other->id)) {
        if (!known(other->id).is_unknown()) return TypeEvidence{&s, EvidenceKind::kComparison, known(other->id), false};
        r.deferred = true;
        return std::nullopt;
      }
      // Compared with a constant or with itself: the type from other definitions.
      if (!known(v).is_unknown()) return TypeEvidence{&s, EvidenceKind::kComparison, known(v), false};
      return std::nullopt;
    }
    if (!known(v).is_unknown()) return TypeEvidence{&s, EvidenceKind::kDefinition, known(v), false};
    return std::nullopt;
  };
  // Target of a plain copy `x = v` into an untyped local.
  auto copy_target = [&](const Statement& s, LocalId v) -> std::optional<LocalId> {
    const auto* a = s.as<ir::AssignStmt>();
    if (a == nullptr) return std::nullopt;
    const auto* to = std::get_if<ir::LocalRef>(&a->target);
    const auto* imm = std::get_if<Immediate>(&a->value);
    const auto* from = imm != nullptr ? std::get_if<ir::LocalRef>(imm) : nullptr;
    if (to == nullptr || from == nullptr || from->id != v || !known(to->id).is_unknown()) return std::nullopt;
    return to->id;
  };

  std::set<std::pair<const Statement*, Aliases>> visited;
  std::vector<std::pair<const Statement*, Aliases>> stack;
  auto push_successors = [&](const Statement* s, const Aliases& aliases) {
    std::vector<Statement*> next = ir::successors(body, s);
    if (ir::can_throw(*s)) {
      for (Statement* h : ir::exceptional_successors(body, s)) next.push_back(h);
    }
    for (auto it = next.rbegin(); it != next.rend(); ++it) stack.emplace_back(*it, aliases);
  };
  push_successors(decl.statement, {decl.local});
  while (!stack.empty()) {
    auto [s, aliases] = std::move(stack.back());
    stack.pop_back();
    if (!visited.insert({s, aliases}).second) continue;
    const auto reads = ir::uses(*s);
    bool stop = false;
    Aliases next = aliases;
    std::optional<LocalId> copied;
    for (LocalId v : aliases) {
      if (std::find(reads.begin(), reads.end(), v) == reads.end()) continue;
      if ((copied = copy_target(*s, v))) {
        if (!holds(next, *copied)) next.push_back(*copied);
        continue;
      }
      if (auto ev = evidence_for(*s, v, aliases)) {
        found.push_back(*ev);
        stop = true;
        break;
      }
      if (!s->as<ir::IfStmt>() && known(v).is_unknown()) r.deferred = true;
    }
    if (stop) continue;
    if (auto d = ir::def(*s); d && d != copied) {
      next.erase(std::remove(next.begin(), next.end(), *d), next.end());  // reassigned
    }
    if (next.empty()) continue;
    std::sort(next.begin(), next.end());
    push_successors(s, next);
  }

  if (!found.empty()) {
    for (size_t k = 1; k < found.size(); ++k) {
      if (!same_category(found[0].type, found[k].type)) {
        std::ostringstream msg;
        msg << "constant at " << where(decl.statement) << " for " << body.locals[decl.local].name << ": "
            << found[0].type.to_string() << " (" << evidence_kind_name(found[0].kind) << " at "
            << where(found[0].source) << ") vs " << found[k].type.to_string() << " ("
            << evidence_kind_name(found[k].kind) << " at " << where(found[k].source) << ")";
        raise(ErrorCode::kConflictingEvidence, body, decl.statement, msg.str());
      }
    }
    r.evidence = found[0];
  }
  return r;
}

IrType resolve_ambiguous(const Body& body, const AmbiguousDeclaration& decl) {
  return pick(body, decl, search_evidence(body, current_types(body), decl));
}

std::vector<IrType> resolve_all_ambiguous(Body& body, const std::vector<AmbiguousDeclaration>& decls) {
  std::vector<IrType> result(decls.size(), IrType::unknown());
  std::map<LocalId, IrType> seeds;
  std::vector<size_t> pending(decls.size());
  for (size_t i = 0; i < decls.size(); ++i) pending[i] = i;

  auto apply = [&](size_t i, const IrType& t) {
    result[i] = t;
    const LocalId l = decls[i].local;
    const IrType& have = body.locals[l].type;
    if (!have.is_unknown() && !same_category(have, t)) {
      raise(ErrorCode::kConflictingEvidence, body, decls[i].statement,
            "constant for " + body.locals[l].name + " resolves to " + t.to_string() + " but the local is " +
                have.to_string());
    }
    seeds[l] = join(seeds.count(l) ? seeds[l] : IrType::unknown(), t);
  };

  const size_t max_rounds = decls.size() + 1;
  for (size_t round = 0; round < max_rounds && !pending.empty(); ++round) {
    const std::vector<IrType> snapshot = current_types(body);
    std::vector<size_t> next;
    std::vector<std::pair<size_t, IrType>> decided;
    for (size_t i : pending) {
      const Resolution r = search_evidence(body, snapshot, decls[i]);
      if (!r.evidence && r.deferred && round + 1 < max_rounds) {
        next.push_back(i);
      } else {
        decided.emplace_back(i, pick(body, decls[i], r));
      }
    }
    for (const auto& [i, t] : decided) apply(i, t);
    if (decided.empty()) {
      // Nothing moved: the rest default.
      for (size_t i : next) apply(i, pick(body, decls[i], Resolution{}));
      next.clear();
    }
    // Let the new types flow before the next round.
    const auto types = fixpoint(body, seeds);
    for (size_t l = 0; l < types.size(); ++l) body.locals[l].type = types[l];
    pending = std::move(next);
  }
  return result;
}

void rewrite_constant(const AmbiguousDeclaration& decl, const IrType& t) {
  auto& a = *decl.statement->as<ir::AssignStmt>();
  auto fail_at = [&](ErrorCode code, const std::string& msg) {
    Error e(code, msg);
    if (decl.statement->address) e.address = *decl.statement->address;
    throw e;
  };
  const ir::Category c = t.category();
  if (decl.width == ConstWidth::k32) {
    switch (c) {
      case ir::Category::kInt: a.value = Immediate{ir::IntConstant{static_cast<int32_t>(decl.bits)}}; break;
      case ir::Category::kFloat: a.value = Immediate{ir::FloatConstant{static_cast<uint32_t>(decl.bits)}}; break;
      case ir::Category::kRef:
        if (decl.bits != 0) {
          fail_at(ErrorCode::kNonZeroNull,
                  "nonzero constant " + std::to_string(static_cast<int32_t>(decl.bits)) + " used as a reference");
        }
        a.value = Immediate{ir::NullConstant{}};
        break;
      default: fail_at(ErrorCode::kConflictingEvidence, "32-bit constant used as " + t.to_string());
    }
  } else {
    switch (c) {
      case ir::Category::kLong: a.value = Immediate{ir::LongConstant{static_cast<int64_t>(decl.bits)}}; break;
      case ir::Category::kDouble: a.value = Immediate{ir::DoubleConstant{decl.bits}}; break;
      default: fail_at(ErrorCode::kConflictingEvidence, "64-bit constant used as " + t.to_string());
    }
  }
  a.provisional = false;
}

void finalize_types(Body& body) {
  propagate_types(body);
  for (auto& sp : body.statements) {
    auto* a = sp->as<ir::AssignStmt>();
    if (a == nullptr || !a->provisional) continue;
    if (const auto* arr = std::get_if<ir::ArrayAccess>(&a->target)) {
      IrType element = IrType::unknown();
      if (arr->base < body.locals.size() && body.locals[arr->base].type.tag() == IrType::Tag::kArray) {
        element = body.locals[arr->base].type.element();
      }
      a->value = element_constant(element, arr->kind, std::get<Immediate>(a->value));
    }
    a->provisional = false;
  }
  propagate_types(body);
  for (auto& l : body.locals) {
    if (l.type.tag() == IrType::Tag::kNull) l.type = IrType::object();
  }
  for (size_t i = 0; i < body.locals.size(); ++i) {
    if (!body.locals[i].type.is_unknown()) continue;
    const Statement* at = nullptr;
    for (const auto& sp : body.statements) {
      const auto m = mentioned(*sp);
      if (std::find(m.begin(), m.end(), i) != m.end()) {
        at = sp.get();
        break;
      }
    }
    raise(ErrorCode::kUntypable, body, at, "no type evidence for local " + body.locals[i].name);
  }
}

void infer_local_types(Body& body) {
  try {
    propagate_types(body);
    const auto decls = find_ambiguous_declarations(body);
    const auto types = resolve_all_ambiguous(body, decls);
    for (size_t i = 0; i < decls.size(); ++i) rewrite_constant(decls[i], types[i]);
    finalize_types(body);
  } catch (Error& e) {
    if (e.method.empty()) e.method = body.signature.to_string();
    throw;
  }
}

void fix_zero_comparisons(Body& body) {
  auto is_ref = [&](const Immediate& imm) {
    const auto* l = std::get_if<ir::LocalRef>(&imm);
    return l != nullptr && l->id < body.locals.size() && body.locals[l->id].type.is_reference_like();
  };
  auto is_zero = [](const Immediate& imm) {
    const auto* c = std::get_if<ir::IntConstant>(&imm);
    return c != nullptr && c->value == 0;
  };
  for (auto& sp : body.statements) {
    auto* i = sp->as<ir::IfStmt>();
    if (i == nullptr) continue;
    if (is_ref(i->lhs) && is_zero(i->rhs)) i->rhs = ir::NullConstant{};
    if (is_ref(i->rhs) && is_zero(i->lhs)) i->lhs = ir::NullConstant{};
  }
}

}  // namespace dexlift::typing
