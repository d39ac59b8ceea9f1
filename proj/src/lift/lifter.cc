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

#include "dexlift/lift/lifter.h"

#include "dexlift/error.h"

namespace dexlift::lift {
namespace {

using ir::Immediate;
using ir::IrType;
using ir::LocalId;
using ir::LocalRef;

Immediate local(LocalId id) { return LocalRef{id}; }

IrType operand_type(std::string_view t) {
  if (t == "int") return IrType::int_();
  if (t == "long") return IrType::long_();
  if (t == "float") return IrType::float_();
  if (t == "double") return IrType::double_();
  if (t == "byte") return IrType::byte();
  if (t == "char") return IrType::char_();
  if (t == "short") return IrType::short_();
  if (t == "boolean") return IrType::boolean();
  return IrType::unknown();
}

ir::BinOp bin_op(std::string_view op) {
  if (op == "add") return ir::BinOp::kAdd;
  if (op == "sub" || op == "rsub") return ir::BinOp::kSub;
  if (op == "mul") return ir::BinOp::kMul;
  if (op == "div") return ir::BinOp::kDiv;
  if (op == "rem") return ir::BinOp::kRem;
  if (op == "and") return ir::BinOp::kAnd;
  if (op == "or") return ir::BinOp::kOr;
  if (op == "xor") return ir::BinOp::kXor;
  if (op == "shl") return ir::BinOp::kShl;
  if (op == "shr") return ir::BinOp::kShr;
  if (op == "ushr") return ir::BinOp::kUshr;
  fail(ErrorCode::kBadString, "mapping table: unknown operator " + std::string(op));
}

ir::RelOp rel_op(std::string_view op) {
  if (op == "eq") return ir::RelOp::kEq;
  if (op == "ne") return ir::RelOp::kNe;
  if (op == "lt") return ir::RelOp::kLt;
  if (op == "ge") return ir::RelOp::kGe;
  if (op == "gt") return ir::RelOp::kGt;
  if (op == "le") return ir::RelOp::kLe;
  fail(ErrorCode::kBadString, "mapping table: unknown comparison " + std::string(op));
}

ir::CmpKind cmp_kind(std::string_view op) {
  if (op == "cmpl-float") return ir::CmpKind::kCmplFloat;
  if (op == "cmpg-float") return ir::CmpKind::kCmpgFloat;
  if (op == "cmpl-double") return ir::CmpKind::kCmplDouble;
  if (op == "cmpg-double") return ir::CmpKind::kCmpgDouble;
  if (op == "cmp-long") return ir::CmpKind::kCmpLong;
  fail(ErrorCode::kBadString, "mapping table: unknown compare " + std::string(op));
}

ir::InvokeKind invoke_kind(std::string_view op) {
  if (op == "virtual") return ir::InvokeKind::kVirtual;
  if (op == "super") return ir::InvokeKind::kSuper;
  if (op == "direct") return ir::InvokeKind::kDirect;
  if (op == "static") return ir::InvokeKind::kStatic;
  if (op == "interface") return ir::InvokeKind::kInterface;
  fail(ErrorCode::kBadString, "mapping table: unknown invoke kind " + std::string(op));
}

ir::ArrayKind array_kind(std::string_view t) {
  if (t == "wide") return ir::ArrayKind::kWide;
  if (t == "object") return ir::ArrayKind::kObject;
  if (t == "boolean") return ir::ArrayKind::kBoolean;
  if (t == "byte") return ir::ArrayKind::kByte;
  if (t == "char") return ir::ArrayKind::kChar;
  if (t == "short") return ir::ArrayKind::kShort;
  return ir::ArrayKind::kWord;
}

ir::ArrayKind array_kind_of_element(const IrType& element) {
  switch (element.tag()) {
    case IrType::Tag::kBoolean: return ir::ArrayKind::kBoolean;
    case IrType::Tag::kByte: return ir::ArrayKind::kByte;
    case IrType::Tag::kChar: return ir::ArrayKind::kChar;
    case IrType::Tag::kShort: return ir::ArrayKind::kShort;
    case IrType::Tag::kLong:
    case IrType::Tag::kDouble: return ir::ArrayKind::kWide;
    case IrType::Tag::kRef:
    case IrType::Tag::kArray: return ir::ArrayKind::kObject;
    default: return ir::ArrayKind::kWord;
  }
}

[[noreturn]] void bad_payload(const isa::Instruction& ins, const std::string& msg) {
  Error e(ErrorCode::kBadPayload, msg);
  e.address = ins.address;
  e.opcode = ins.opcode;
  throw e;
}

}  // namespace

MappedInstruction map_instruction(size_t i, const RegisterMap& regs, const LiftContext& ctx) {
  const isa::Instruction& ins = ctx.instructions->at(i);
  const dex::DexFile& dex = *ctx.dex;
  const MappingRow& row = mapping_for(ins.opcode);
  const auto& r = ins.registers;
  MappedInstruction out;
  auto use = [&](size_t k) { return local(regs.use(i, r.at(k))); };
  auto def = [&]() { return LocalRef{regs.def(i)}; };
  auto emit = [&](ir::StmtNode node) { out.statements.push_back(std::move(node)); };
  auto assign = [&](ir::LValue target, ir::Value value, bool provisional = false) {
    emit(ir::AssignStmt{std::move(target), std::move(value), provisional});
  };
  auto branch = [&](size_t slot, uint32_t address) {
    out.branches.push_back({out.statements.size() - 1, slot, address});
  };
  auto type_ref = [&]() { return dex::resolve_type(dex, ins.pool_index->index); };
  auto field_ref = [&]() { return dex::resolve_field(dex, ins.pool_index->index); };

  switch (row.rule) {
    case Rule::kNop:
    case Rule::kMoveResult: break;
    case Rule::kMove: assign(def(), Immediate{use(1)}); break;
    case Rule::kMoveException:
      emit(ir::IdentityStmt{regs.def(i), ir::IdentityKind::kCaughtException, 0});
      break;
    case Rule::kReturnVoid: emit(ir::ReturnVoidStmt{}); break;
    case Rule::kReturn: emit(ir::ReturnStmt{use(0)}); break;
    case Rule::kConst: {
      const int64_t lit = ins.literal.value_or(0);
      if (row.type == "wide") {
        assign(def(), Immediate{ir::LongConstant{lit}}, true);
      } else {
        assign(def(), Immediate{ir::IntConstant{static_cast<int32_t>(lit)}}, true);
      }
      break;
    }
    case Rule::kConstString:
      assign(def(), Immediate{ir::StringConstant{dex::resolve_string(dex, ins.pool_index->index)}});
      break;
    case Rule::kConstClass: assign(def(), Immediate{ir::ClassConstant{type_ref()}}); break;
    case Rule::kMonitorEnter: emit(ir::MonitorEnterStmt{use(0)}); break;
    case Rule::kMonitorExit: emit(ir::MonitorExitStmt{use(0)}); break;
    case Rule::kCheckCast:
      assign(def(), ir::Cast{IrType::unknown(), IrType::from_descriptor(type_ref()), use(0)});
      break;
    case Rule::kInstanceOf: assign(def(), ir::InstanceOf{IrType::from_descriptor(type_ref()), use(1)}); break;
    case Rule::kArrayLength: assign(def(), ir::Lengthof{use(1)}); break;
    case Rule::kNewInstance: assign(def(), ir::New{type_ref()}); break;
    case Rule::kNewArray: assign(def(), ir::NewArray{IrType::from_descriptor(type_ref()), use(1)}); break;
    case Rule::kFilledNewArray: {
      const IrType array = IrType::from_descriptor(type_ref());
      LocalId target;
      if (auto res = regs.result_of(i)) {
        target = *res;
      } else {
        target = ctx.body->add_local("tmp" + std::to_string(ctx.body->locals.size()), array);
      }
      assign(LocalRef{target}, ir::NewArray{array, ir::IntConstant{static_cast<int32_t>(r.size())}});
      const ir::ArrayKind kind = array_kind_of_element(array.element());
      for (size_t k = 0; k < r.size(); ++k) {
        assign(ir::ArrayAccess{target, ir::IntConstant{static_cast<int32_t>(k)}, kind}, Immediate{use(k)});
      }
      break;
    }
    case Rule::kFillArrayData: {
      if (!ins.payload) bad_payload(ins, "fill-array-data without a payload");
      const auto* data = std::get_if<isa::FillArrayPayload>(&*ins.payload);
      if (data == nullptr) bad_payload(ins, "fill-array-data payload has the wrong kind");
      const uint32_t count = data->element_count();
      if (count == 0) {
        emit(ir::NopStmt{});
        break;
      }
      const LocalId base = regs.use(i, r.at(0));
      ir::ArrayKind kind = ir::ArrayKind::kWord;
      switch (data->element_width) {
        case 1: kind = ir::ArrayKind::kByte; break;
        case 2: kind = ir::ArrayKind::kShort; break;
        case 4: kind = ir::ArrayKind::kWord; break;
        case 8: kind = ir::ArrayKind::kWide; break;
        default: bad_payload(ins, "unsupported array element width");
      }
      // Raw element bits, zero-extended; typing reinterprets them.
      for (uint32_t k = 0; k < count; ++k) {
        const uint64_t bits = data->element_bits(k);
        Immediate value = data->element_width == 8
                              ? Immediate{ir::LongConstant{static_cast<int64_t>(bits)}}
                              : Immediate{ir::IntConstant{static_cast<int32_t>(static_cast<uint32_t>(bits))}};
        assign(ir::ArrayAccess{base, ir::IntConstant{static_cast<int32_t>(k)}, kind}, std::move(value), true);
      }
      break;
    }
    case Rule::kThrow: emit(ir::ThrowStmt{use(0)}); break;
    case Rule::kGoto:
      emit(ir::GotoStmt{});
      branch(0, *ins.branch_target());
      break;
    case Rule::kPackedSwitch:
    case Rule::kSparseSwitch: {
      if (!ins.payload) bad_payload(ins, "switch without a payload");
      const auto* sw = std::get_if<isa::SwitchPayload>(&*ins.payload);
      if (sw == nullptr || sw->packed != (row.rule == Rule::kPackedSwitch)) {
        bad_payload(ins, "switch payload has the wrong kind");
      }
      const uint32_t fallthrough = ins.address + ins.width;
      const size_t n = sw->targets.size();
      if (sw->packed) {
        emit(ir::TableSwitchStmt{use(0), sw->first_key, std::vector<ir::Statement*>(n, nullptr), nullptr});
      } else {
        emit(ir::LookupSwitchStmt{use(0), sw->keys, std::vector<ir::Statement*>(n, nullptr), nullptr});
      }
      for (size_t k = 0; k < n; ++k) branch(k, static_cast<uint32_t>(sw->targets[k]));
      branch(n, fallthrough);
      break;
    }
    case Rule::kCmp: assign(def(), ir::Compare{cmp_kind(row.op), use(1), use(2)}); break;
    case Rule::kIf:
      emit(ir::IfStmt{rel_op(row.op), use(0), use(1), nullptr});
      branch(0, *ins.branch_target());
      break;
    case Rule::kIfz:
      emit(ir::IfStmt{rel_op(row.op), use(0), ir::IntConstant{0}, nullptr});
      branch(0, *ins.branch_target());
      break;
    case Rule::kAget:
      assign(def(), ir::ArrayAccess{regs.use(i, r.at(1)), use(2), array_kind(row.type)});
      break;
    case Rule::kAput:
      assign(ir::ArrayAccess{regs.use(i, r.at(1)), use(2), array_kind(row.type)}, Immediate{use(0)});
      break;
    case Rule::kIget: assign(def(), ir::FieldAccess{regs.use(i, r.at(1)), field_ref()}); break;
    case Rule::kIput: assign(ir::FieldAccess{regs.use(i, r.at(1)), field_ref()}, Immediate{use(0)}); break;
    case Rule::kSget: assign(def(), ir::FieldAccess{std::nullopt, field_ref()}); break;
    case Rule::kSput: assign(ir::FieldAccess{std::nullopt, field_ref()}, Immediate{use(0)}); break;
    case Rule::kInvoke: {
      const dex::MethodRef& m = dex::resolve_method(dex, ins.pool_index->index);
      const ir::InvokeKind kind = invoke_kind(row.op);
      std::vector<Immediate> args;
      size_t k = 0;
      if (kind != ir::InvokeKind::kStatic) args.push_back(use(k++));
      for (const auto& p : m.proto.parameters) {
        args.push_back(use(k));
        k += (p == "J" || p == "D") ? 2 : 1;
      }
      emit(ir::InvokeStmt{kind, m, std::move(args), regs.result_of(i)});
      break;
    }
    case Rule::kNeg: assign(def(), ir::UnaryOp{use(1), operand_type(row.type)}); break;
    case Rule::kNot: {
      const Immediate ones = row.type == "long" ? Immediate{ir::LongConstant{-1}} : Immediate{ir::IntConstant{-1}};
      assign(def(), ir::BinaryOp{ir::BinOp::kXor, use(1), ones, operand_type(row.type)});
      break;
    }
    case Rule::kConvert: {
      const auto gt = row.type.find('>');
      assign(def(), ir::Cast{operand_type(row.type.substr(0, gt)), operand_type(row.type.substr(gt + 1)), use(1)});
      break;
    }
    case Rule::kBinop: assign(def(), ir::BinaryOp{bin_op(row.op), use(1), use(2), operand_type(row.type)}); break;
    case Rule::kBinop2Addr:
      assign(def(), ir::BinaryOp{bin_op(row.op), use(0), use(1), operand_type(row.type)});
      break;
    case Rule::kBinopLit: {
      const Immediate lit = ir::IntConstant{static_cast<int32_t>(ins.literal.value_or(0))};
      if (row.op == "rsub") {
        assign(def(), ir::BinaryOp{ir::BinOp::kSub, lit, use(1), IrType::int_()});
      } else {
        assign(def(), ir::BinaryOp{bin_op(row.op), use(1), lit, IrType::int_()});
      }
      break;
    }
  }
  return out;
}

void resolve_branches(ir::Body& body, const std::vector<PendingJump>& pending) {
  for (const auto& p : pending) {
    auto it = body.addr_map.find(p.target_address);
    if (it == body.addr_map.end()) {
      Error e(ErrorCode::kDanglingTarget, "branch target " + std::to_string(p.target_address) +
                                              " is not the start of a lifted instruction");
      e.address = p.jump->address;
      throw e;
    }
    auto slots = ir::branch_targets(*p.jump);
    if (p.slot >= slots.size()) fail(ErrorCode::kDanglingTarget, "branch slot out of range");
    *slots[p.slot] = it->second;
  }
}

ir::Body lift_code(const dex::DexFile& dex, const dex::MethodRef& method, bool is_static,
                   const dex::CodeItem& code) {
  try {
    ir::Body body;
    body.signature = method;
    body.is_static = is_static;
    const std::vector<isa::Instruction> instructions = isa::decode_stream(code.insns);
    RegisterMap regs = RegisterMap::build(code, instructions, dex, method, is_static, body);
    LiftContext ctx{&dex, &instructions, &body};

    ir::Statement* entry = body.append(ir::NopStmt{});
    {
      const auto& params = regs.parameter_locals();
      size_t k = 0;
      if (!is_static) body.append(ir::IdentityStmt{params.at(k++), ir::IdentityKind::kThis, 0});
      for (uint32_t p = 0; k < params.size(); ++p) {
        body.append(ir::IdentityStmt{params[k++], ir::IdentityKind::kParameter, p});
      }
    }

    std::vector<uint32_t> waiting;  // addresses that produced no statement yet
    std::vector<PendingJump> pending;
    for (size_t i = 0; i < instructions.size(); ++i) {
      const auto& ins = instructions[i];
      if (ins.is_payload) continue;
      waiting.push_back(ins.address);
      const Rule rule = mapping_for(ins.opcode).rule;
      if (rule == Rule::kMoveResult) {
        // Must follow an invoke or filled-new-array, skipping nops.
        size_t j = i;
        while (j > 0 && !instructions[j - 1].is_payload && mapping_for(instructions[j - 1].opcode).rule == Rule::kNop) {
          --j;
        }
        const bool bound = j > 0 && !instructions[j - 1].is_payload &&
                           (mapping_for(instructions[j - 1].opcode).rule == Rule::kInvoke ||
                            mapping_for(instructions[j - 1].opcode).rule == Rule::kFilledNewArray);
        if (!bound) {
          Error e(ErrorCode::kOrphanMoveResult, "move-result does not follow an invoke");
          e.address = ins.address;
          e.opcode = ins.opcode;
          throw e;
        }
      }
      MappedInstruction mapped = map_instruction(i, regs, ctx);
      if (mapped.statements.empty()) continue;
      std::vector<ir::Statement*> made;
      for (auto& node : mapped.statements) made.push_back(body.append(std::move(node), ins.address));
      for (uint32_t a : waiting) body.addr_map[a] = made.front();
      waiting.clear();
      for (const auto& b : mapped.branches) {
        ir::Statement* s = made.at(b.statement);
        auto it = body.addr_map.find(b.target_address);
        if (it != body.addr_map.end()) {
          *ir::branch_targets(*s).at(b.slot) = it->second;
        } else {
          *ir::branch_targets(*s).at(b.slot) = entry;
          pending.push_back({s, b.slot, b.target_address});
        }
      }
    }
    for (uint32_t a : waiting) body.addr_map[a] = body.statements.back().get();
    resolve_branches(body, pending);

    for (const auto& t : code.tries) {
      const uint32_t end = t.start_address + t.instruction_count;
      ir::Statement* first = nullptr;
      ir::Statement* last = nullptr;
      for (const auto& s : body.statements) {
        if (!s->address || *s->address < t.start_address || *s->address >= end) continue;
        if (first == nullptr) first = s.get();
        last = s.get();
      }
      for (const auto& h : t.handlers) {
        auto it = body.addr_map.find(h.address);
        if (it == body.addr_map.end()) {
          Error e(ErrorCode::kDanglingTarget, "handler address " + std::to_string(h.address) +
                                                  " is not the start of a lifted instruction");
          e.address = h.address;
          throw e;
        }
        if (first == nullptr) continue;
        body.traps.push_back({first, last, it->second, h.exception_type});
      }
    }
    return body;
  } catch (Error& e) {
    if (e.method.empty()) e.method = method.to_string();
    throw;
  }
}

ir::Body lift_method(const dex::DexFile& dex, const dex::MethodDef& method, const dex::CodeItem& code) {
  return lift_code(dex, dex::resolve_method(dex, method.method_idx), method.is_static(), code);
}

}  // namespace dexlift::lift
