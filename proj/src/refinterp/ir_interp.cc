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

#include <algorithm>
#include <unordered_map>

#include "dexlift/error.h"
#include "dexlift/ir/text.h"
#include "runtime.h"

namespace dexlift::refinterp {
namespace {

using detail::Arith;
using detail::JavaThrow;
using ir::IrType;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// A kind error in the IR: the typed program is wrong, not the input.
struct Stuck {
  std::string why;
};

char kind_of_type(const IrType& t) {
  switch (t.tag()) {
    case IrType::Tag::kBoolean: case IrType::Tag::kByte: case IrType::Tag::kChar:
    case IrType::Tag::kShort: case IrType::Tag::kInt: return 'I';
    case IrType::Tag::kLong: return 'J';
    case IrType::Tag::kFloat: return 'F';
    case IrType::Tag::kDouble: return 'D';
    case IrType::Tag::kNull: case IrType::Tag::kRef: case IrType::Tag::kArray: return 'L';
    case IrType::Tag::kUnknown: break;
  }
  return '?';
}

// Conversion letter for a primitive type (B, C, S kept distinct).
char conversion_letter(const IrType& t) {
  switch (t.tag()) {
    case IrType::Tag::kBoolean: return 'Z';
    case IrType::Tag::kByte: return 'B';
    case IrType::Tag::kChar: return 'C';
    case IrType::Tag::kShort: return 'S';
    default: return kind_of_type(t);
  }
}

Arith to_arith(ir::BinOp op) {
  switch (op) {
    case ir::BinOp::kAdd: return Arith::kAdd;
    case ir::BinOp::kSub: return Arith::kSub;
    case ir::BinOp::kMul: return Arith::kMul;
    case ir::BinOp::kDiv: return Arith::kDiv;
    case ir::BinOp::kRem: return Arith::kRem;
    case ir::BinOp::kAnd: return Arith::kAnd;
    case ir::BinOp::kOr: return Arith::kOr;
    case ir::BinOp::kXor: return Arith::kXor;
    case ir::BinOp::kShl: return Arith::kShl;
    case ir::BinOp::kShr: return Arith::kShr;
    case ir::BinOp::kUshr: return Arith::kUshr;
  }
  return Arith::kAdd;
}

class IrMachine {
 public:
  IrMachine(const ir::Body& body, const Env& env, Heap& heap)
      : body_(body), env_(env), heap_(heap), index_(body.index_map()) {}

  Outcome run(const std::vector<RtValue>& args) {
    locals_.assign(body_.locals.size(), std::nullopt);
    args_ = args;
    size_t pc = 0;
    try {
      while (true) {
        detail::charge(steps_, env_);
        if (pc >= body_.statements.size()) throw Stuck{"ran off the end of the body"};
        const ir::Statement& s = *body_.statements[pc];
        try {
          if (auto done = step(s, pc)) {
            done->trace = std::move(trace_);
            return *done;
          }
        } catch (const JavaThrow& t) {
          const uint32_t ex = t.handle != 0 ? t.handle : detail::make_exception(heap_, t.type);
          if (!dispatch(pc, ex, pc)) return threw(t.type);
        }
      }
    } catch (const Stuck& st) {
      Outcome o;
      o.kind = Outcome::Kind::kStuck;
      o.detail = "L" + std::to_string(pc) + ": " + st.why;
      o.trace = std::move(trace_);
      return o;
    }
  }

 private:
  Outcome threw(const std::string& type) {
    Outcome o;
    o.kind = Outcome::Kind::kThrew;
    o.thrown = type;
    o.trace = std::move(trace_);
    return o;
  }

  bool dispatch(size_t at, uint32_t ex, size_t& pc) {
    const std::string& type = heap_.at(ex).type;
    for (const ir::Trap& t : body_.traps) {
      if (at < index_.at(t.first) || at > index_.at(t.last)) continue;
      if (t.exception_type && !env_.is_subtype(type, *t.exception_type)) continue;
      pending_exception_ = ex;
      pc = index_.at(t.handler);
      return true;
    }
    return false;
  }

  RtValue local(ir::LocalId l) {
    if (l >= locals_.size() || !locals_[l]) {
      throw Stuck{"read of unset local " + (l < body_.locals.size() ? body_.locals[l].name : std::to_string(l))};
    }
    return *locals_[l];
  }

  void set_local(ir::LocalId l, const RtValue& v) {
    if (l >= locals_.size()) throw Stuck{"write to a missing local"};
    const char want = kind_of_type(body_.locals[l].type);
    if (want != v.kind) {
      throw Stuck{std::string("storing a ") + v.kind + " value in " + body_.locals[l].name + ": " +
                  body_.locals[l].type.to_string()};
    }
    locals_[l] = v;
  }

  RtValue imm(const ir::Immediate& i) {
    return std::visit(Overloaded{
                          [&](const ir::LocalRef& l) { return local(l.id); },
                          [](const ir::IntConstant& c) { return RtValue::i(c.value); },
                          [](const ir::LongConstant& c) { return RtValue::j(c.value); },
                          [](const ir::FloatConstant& c) { return RtValue{'F', c.bits}; },
                          [](const ir::DoubleConstant& c) { return RtValue{'D', c.bits}; },
                          [](const ir::NullConstant&) { return RtValue::null(); },
                          [&](const ir::StringConstant& c) { return RtValue::ref(heap_.intern_string(c.value)); },
                          [&](const ir::ClassConstant& c) { return RtValue::ref(heap_.class_object(c.descriptor)); },
                      },
                      i);
  }

  RtValue expect(const RtValue& v, char kind, const char* what) {
    if (v.kind != kind) throw Stuck{std::string(what) + " expects " + kind + " but got " + v.kind};
    return v;
  }

  uint32_t non_null(const RtValue& v) {
    expect(v, 'L', "dereference");
    if (v.bits == 0) throw JavaThrow{detail::kNullPointer};
    return static_cast<uint32_t>(v.bits);
  }

  HeapObject& element(const ir::ArrayAccess& a, size_t* index) {
    HeapObject& arr = heap_.at(non_null(local(a.base)));
    if (arr.type.empty() || arr.type[0] != '[') throw Stuck{"array access on a non-array"};
    const int32_t i = static_cast<int32_t>(expect(imm(a.index), 'I', "array index").bits);
    if (i < 0 || static_cast<size_t>(i) >= arr.elements.size()) throw JavaThrow{detail::kIndexOutOfBounds};
    *index = static_cast<size_t>(i);
    return arr;
  }

  std::map<std::string, uint64_t>& field_slots(const ir::FieldAccess& f) {
    if (!f.base) return heap_.statics;
    return heap_.at(non_null(local(*f.base))).fields;
  }

  RtValue eval(const ir::Value& v) {
    return std::visit(
        Overloaded{
            [&](const ir::Immediate& i) { return imm(i); },
            [&](const ir::FieldAccess& f) {
              auto& slots = field_slots(f);
              return detail::load_value(f.field.type, slots[f.field.to_string()]);
            },
            [&](const ir::ArrayAccess& a) {
              size_t i = 0;
              HeapObject& arr = element(a, &i);
              return detail::load_value(arr.type.substr(1), arr.elements[i]);
            },
            [&](const ir::BinaryOp& b) {
              const char kind = kind_of_type(b.type);
              const Arith op = to_arith(b.op);
              const bool shift = op == Arith::kShl || op == Arith::kShr || op == Arith::kUshr;
              const RtValue l = expect(imm(b.lhs), kind, "arithmetic");
              const RtValue r = expect(imm(b.rhs), shift ? 'I' : kind, "arithmetic");
              return detail::arith(op, kind, l, r);
            },
            [&](const ir::UnaryOp& u) {
              const char kind = kind_of_type(u.type);
              return detail::negate(kind, expect(imm(u.operand), kind, "negation"));
            },
            [&](const ir::Cast& c) {
              const RtValue x = imm(c.operand);
              if (c.from.is_unknown() || c.to.is_reference_like()) {
                expect(x, 'L', "reference cast");
                if (x.bits != 0 && !detail::instance_of(env_, heap_, x, c.to.descriptor())) {
                  throw JavaThrow{detail::kClassCast};
                }
                return x;
              }
              expect(x, kind_of_type(c.from), "conversion");
              return detail::convert(conversion_letter(c.from), conversion_letter(c.to), x);
            },
            [&](const ir::InstanceOf& i) {
              const RtValue x = expect(imm(i.operand), 'L', "instanceof");
              return RtValue::i(detail::instance_of(env_, heap_, x, i.type.descriptor()) ? 1 : 0);
            },
            [&](const ir::New& n) { return RtValue::ref(heap_.allocate(n.descriptor)); },
            [&](const ir::NewArray& n) {
              const int32_t size = static_cast<int32_t>(expect(imm(n.size), 'I', "array size").bits);
              if (size < 0) throw JavaThrow{detail::kNegativeSize};
              return RtValue::ref(heap_.new_array(n.type.descriptor(), static_cast<size_t>(size)));
            },
            [&](const ir::Lengthof& l) {
              const HeapObject& arr = heap_.at(non_null(imm(l.operand)));
              return RtValue::i(static_cast<int32_t>(arr.elements.size()));
            },
            [&](const ir::Compare& c) {
              char kind = 'J';
              bool gt = false;
              switch (c.kind) {
                case ir::CmpKind::kCmplFloat: kind = 'F'; break;
                case ir::CmpKind::kCmpgFloat: kind = 'F', gt = true; break;
                case ir::CmpKind::kCmplDouble: kind = 'D'; break;
                case ir::CmpKind::kCmpgDouble: kind = 'D', gt = true; break;
                case ir::CmpKind::kCmpLong: break;
              }
              const RtValue l = expect(imm(c.lhs), kind, "comparison");
              const RtValue r = expect(imm(c.rhs), kind, "comparison");
              return RtValue::i(detail::compare(kind, gt, l, r));
            },
        },
        v);
  }

  void assign(const ir::AssignStmt& a) {
    // Evaluation order: the value first, then the target's base and index,
    // which matches the Dalvik instruction's single register read.
    std::visit(Overloaded{
                   [&](const ir::LocalRef& l) { set_local(l.id, eval(a.value)); },
                   [&](const ir::FieldAccess& f) {
                     auto& slots = field_slots(f);
                     const RtValue v = expect(eval(a.value), kind_of(f.field.type), "field store");
                     slots[f.field.to_string()] = detail::store_bits(f.field.type, v);
                   },
                   [&](const ir::ArrayAccess& arr) {
                     size_t i = 0;
                     HeapObject& obj = element(arr, &i);
                     const std::string elem = obj.type.substr(1);
                     const RtValue v = expect(eval(a.value), kind_of(elem), "array store");
                     if (kind_of(elem) == 'L' && v.bits != 0 && !detail::instance_of(env_, heap_, v, elem)) {
                       throw JavaThrow{"Ljava/lang/ArrayStoreException;"};
                     }
                     obj.elements[i] = detail::store_bits(elem, v);
                   },
               },
               a.target);
  }

  bool condition(const ir::IfStmt& i) {
    const RtValue l = imm(i.lhs);
    const RtValue r = imm(i.rhs);
    if (l.kind != r.kind) throw Stuck{std::string("comparing ") + l.kind + " with " + r.kind};
    if (l.kind == 'L') {
      if (i.op == ir::RelOp::kEq) return l.bits == r.bits;
      if (i.op == ir::RelOp::kNe) return l.bits != r.bits;
      throw Stuck{"ordering comparison on references"};
    }
    if (l.kind != 'I') throw Stuck{std::string("if on kind ") + l.kind};
    const int32_t a = static_cast<int32_t>(l.bits), b = static_cast<int32_t>(r.bits);
    switch (i.op) {
      case ir::RelOp::kEq: return a == b;
      case ir::RelOp::kNe: return a != b;
      case ir::RelOp::kLt: return a < b;
      case ir::RelOp::kGe: return a >= b;
      case ir::RelOp::kGt: return a > b;
      case ir::RelOp::kLe: return a <= b;
    }
    return false;
  }

  void invoke(const ir::InvokeStmt& inv) {
    std::vector<RtValue> args;
    for (const auto& a : inv.args) args.push_back(imm(a));
    const bool is_static = inv.kind == ir::InvokeKind::kStatic;
    std::vector<char> want;
    if (!is_static) want.push_back('L');
    for (const auto& p : inv.method.proto.parameters) want.push_back(kind_of(p));
    if (want.size() != args.size()) throw Stuck{"argument count"};
    for (size_t k = 0; k < args.size(); ++k) expect(args[k], want[k], "argument");
    if (!is_static) non_null(args[0]);
    const auto result = detail::call_stub(env_, heap_, inv.method, args, trace_);
    if (inv.result) {
      if (!result) throw Stuck{"void call bound to a local"};
      set_local(*inv.result, *result);
    }
  }

  size_t target(const ir::Statement* s) const { return index_.at(s); }

  std::optional<Outcome> step(const ir::Statement& s, size_t& pc) {
    size_t next = pc + 1;
    std::optional<Outcome> done;
    std::visit(Overloaded{
                   [&](const ir::NopStmt&) {},
                   [&](const ir::BreakpointStmt&) {},
                   [&](const ir::IdentityStmt& i) {
                     switch (i.source) {
                       case ir::IdentityKind::kThis:
                         if (args_.empty()) throw Stuck{"no receiver"};
                         set_local(i.target, args_[0]);
                         break;
                       case ir::IdentityKind::kParameter: {
                         const size_t k = i.parameter + (body_.is_static ? 0 : 1);
                         if (k >= args_.size()) throw Stuck{"missing argument"};
                         set_local(i.target, args_[k]);
                         break;
                       }
                       case ir::IdentityKind::kCaughtException:
                         set_local(i.target, RtValue::ref(pending_exception_));
                         break;
                     }
                   },
                   [&](const ir::AssignStmt& a) { assign(a); },
                   [&](const ir::IfStmt& i) {
                     if (condition(i)) next = target(i.target);
                   },
                   [&](const ir::GotoStmt& g) { next = target(g.target); },
                   [&](const ir::TableSwitchStmt& t) {
                     const int64_t key = static_cast<int32_t>(expect(imm(t.key), 'I', "switch").bits);
                     const int64_t slot = key - t.first_key;
                     next = slot >= 0 && slot < static_cast<int64_t>(t.targets.size()) ? target(t.targets[slot])
                                                                                         : target(t.default_target);
                   },
                   [&](const ir::LookupSwitchStmt& l) {
                     const int32_t key = static_cast<int32_t>(expect(imm(l.key), 'I', "switch").bits);
                     auto it = std::find(l.keys.begin(), l.keys.end(), key);
                     next = it != l.keys.end() ? target(l.targets[it - l.keys.begin()]) : target(l.default_target);
                   },
                   [&](const ir::InvokeStmt& inv) { invoke(inv); },
                   [&](const ir::ReturnStmt& r) {
                     const RtValue v = expect(imm(r.value), kind_of(body_.signature.proto.return_type), "return");
                     done = Outcome{};
                     done->value = heap_.render(v);
                     done->returned = v;
                   },
                   [&](const ir::ReturnVoidStmt&) { done = Outcome{}; },
                   [&](const ir::ThrowStmt& t) {
                     const uint32_t h = non_null(imm(t.value));
                     throw JavaThrow{heap_.at(h).type, h};
                   },
                   [&](const ir::MonitorEnterStmt& m) { non_null(imm(m.value)); },
                   [&](const ir::MonitorExitStmt& m) { non_null(imm(m.value)); },
               },
               s.node);
    pc = next;
    return done;
  }

  const ir::Body& body_;
  const Env& env_;
  Heap& heap_;
  std::unordered_map<const ir::Statement*, size_t> index_;
  std::vector<std::optional<RtValue>> locals_;
  std::vector<RtValue> args_;
  uint32_t pending_exception_ = 0;
  std::vector<std::string> trace_;
  uint64_t steps_ = 0;
};

}  // namespace

Outcome exec_ir(const ir::Body& body, const std::vector<RtValue>& args, const Env& env, Heap& heap) {
  return IrMachine(body, env, heap).run(args);
}

}  // namespace dexlift::refinterp
