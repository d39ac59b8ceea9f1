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

#include "dexlift/error.h"
#include "dexlift/isa/instruction.h"
#include "runtime.h"

namespace dexlift::refinterp {
namespace {

using detail::Arith;
using detail::JavaThrow;

// Opcode groups follow the Dalvik numbering: each arithmetic block lists
// add, sub, mul, div, rem, and, or, xor, shl, shr, ushr in order.
constexpr Arith kArithOrder[] = {Arith::kAdd, Arith::kSub, Arith::kMul, Arith::kDiv, Arith::kRem, Arith::kAnd,
                                 Arith::kOr,  Arith::kXor, Arith::kShl, Arith::kShr, Arith::kUshr};

// Descriptor letters of aget/aput/iget/iput/sget/sput variants, in opcode
// order: plain, wide, object, boolean, byte, char, short.
constexpr char kAccessKinds[] = {'I', 'J', 'L', 'Z', 'B', 'C', 'S'};

class DalvikMachine {
 public:
  DalvikMachine(const dex::DexFile& dex, const dex::MethodDef& method, const Env& env, Heap& heap)
      : dex_(dex), method_(method), ref_(dex::resolve_method(dex, method.method_idx)), env_(env), heap_(heap) {
    if (!method.code) fail(ErrorCode::kUnsupportedForOracle, "method has no code");
    code_ = &*method.code;
    for (const auto& ins : isa::decode_stream(code_->insns)) {
      index_[ins.address] = instructions_.size();
      instructions_.push_back(ins);
    }
  }

  Outcome run(const std::vector<RtValue>& args) {
    regs_.assign(code_->registers_size, 0);
    bind_arguments(args);
    size_t pc = 0;
    while (true) {
      detail::charge(steps_, env_);
      if (pc >= instructions_.size()) fail(ErrorCode::kUnsupportedForOracle, "ran off the end of the code");
      const isa::Instruction& ins = instructions_[pc];
      try {
        if (auto done = step(ins, pc)) {
          done->trace = std::move(trace_);
          return *done;
        }
      } catch (const JavaThrow& t) {
        const uint32_t ex = t.handle != 0 ? t.handle : detail::make_exception(heap_, t.type);
        if (!dispatch(ins.address, ex, pc)) return threw(heap_.at(ex).type);
      }
    }
  }

 private:
  // ---- Registers ----
  uint32_t& reg(uint32_t r) {
    if (r >= regs_.size()) fail(ErrorCode::kUnsupportedForOracle, "register out of frame");
    return regs_[r];
  }
  RtValue read(uint32_t r, char kind) {
    if (kind == 'J' || kind == 'D') return {kind, reg(r) | (static_cast<uint64_t>(reg(r + 1)) << 32)};
    return {kind, reg(r)};
  }
  void write(uint32_t r, const RtValue& v) {
    reg(r) = static_cast<uint32_t>(v.bits);
    if (v.kind == 'J' || v.kind == 'D') reg(r + 1) = static_cast<uint32_t>(v.bits >> 32);
  }

  void bind_arguments(const std::vector<RtValue>& args) {
    std::vector<char> kinds;
    if (!method_.is_static()) kinds.push_back('L');
    for (const auto& p : ref_.proto.parameters) kinds.push_back(kind_of(p));
    if (args.size() != kinds.size()) fail(ErrorCode::kUnsupportedForOracle, "argument count mismatch");
    uint32_t r = code_->registers_size - code_->ins_size;
    for (size_t i = 0; i < args.size(); ++i) {
      if (args[i].kind != kinds[i]) fail(ErrorCode::kUnsupportedForOracle, "argument kind mismatch");
      write(r, args[i]);
      r += (kinds[i] == 'J' || kinds[i] == 'D') ? 2 : 1;
    }
  }

  Outcome threw(const std::string& type) {
    Outcome o;
    o.kind = Outcome::Kind::kThrew;
    o.thrown = type;
    o.trace = std::move(trace_);
    return o;
  }

  // Finds a handler for exception ex thrown at address; sets pc on success.
  bool dispatch(uint32_t address, uint32_t ex, size_t& pc) {
    const std::string& type = heap_.at(ex).type;
    for (const auto& t : code_->tries) {
      if (address < t.start_address || address >= t.start_address + t.instruction_count) continue;
      for (const auto& h : t.handlers) {
        if (h.exception_type && !env_.is_subtype(type, *h.exception_type)) continue;
        pending_exception_ = ex;
        pc = at(h.address);
        return true;
      }
      return false;  // the innermost try decides
    }
    return false;
  }

  size_t at(uint32_t address) const {
    auto it = index_.find(address);
    if (it == index_.end()) fail(ErrorCode::kUnsupportedForOracle, "branch into the middle of an instruction");
    return it->second;
  }

  std::string pool_string(const isa::Instruction& ins) const {
    return dex::resolve_string(dex_, ins.pool_index->index);
  }
  std::string pool_type(const isa::Instruction& ins) const { return dex::resolve_type(dex_, ins.pool_index->index); }

  uint32_t non_null(uint32_t handle) {
    if (handle == 0) throw JavaThrow{detail::kNullPointer};
    return handle;
  }

  HeapObject& array(uint32_t r, uint32_t index_reg, size_t* index) {
    HeapObject& a = heap_.at(non_null(reg(r)));
    const int32_t i = static_cast<int32_t>(reg(index_reg));
    if (i < 0 || static_cast<size_t>(i) >= a.elements.size()) throw JavaThrow{detail::kIndexOutOfBounds};
    *index = static_cast<size_t>(i);
    return a;
  }

  void invoke(const isa::Instruction& ins) {
    const dex::MethodRef& m = dex::resolve_method(dex_, ins.pool_index->index);
    const uint8_t op = ins.opcode;
    const bool is_static = op == 0x71 || op == 0x77;
    std::vector<RtValue> args;
    size_t k = 0;
    auto next = [&](char kind) {
      if (k >= ins.registers.size()) fail(ErrorCode::kUnsupportedForOracle, "too few argument registers");
      args.push_back(read(ins.registers[k], kind));
      k += (kind == 'J' || kind == 'D') ? 2 : 1;
    };
    if (!is_static) next('L');
    for (const auto& p : m.proto.parameters) next(kind_of(p));
    if (!is_static) non_null(static_cast<uint32_t>(args[0].bits));
    result_ = detail::call_stub(env_, heap_, m, args, trace_);
  }

  Outcome returned(const std::optional<RtValue>& v) {
    Outcome o;
    if (v) o.value = heap_.render(*v);
    o.returned = v;
    return o;
  }

  // Executes ins. Returns the outcome on return; otherwise advances pc.
  std::optional<Outcome> step(const isa::Instruction& ins, size_t& pc) {
    const uint8_t op = ins.opcode;
    const auto& r = ins.registers;
    size_t next = pc + 1;
    auto jump = [&](uint32_t address) { next = at(address); };
    const char ret_kind = kind_of(ref_.proto.return_type);

    if (ins.is_payload) fail(ErrorCode::kUnsupportedForOracle, "executed a payload table");
    switch (op) {
      case 0x00:  // nop; a pending result survives it
        pc = next;
        return std::nullopt;
      case 0x01: case 0x02: case 0x03:
      case 0x07: case 0x08: case 0x09: reg(r[0]) = reg(r[1]); break;
      case 0x04: case 0x05: case 0x06: {
        const uint32_t lo = reg(r[1]), hi = reg(r[1] + 1);
        reg(r[0]) = lo;
        reg(r[0] + 1) = hi;
        break;
      }
      case 0x0a: case 0x0b: case 0x0c:
        if (!result_) fail(ErrorCode::kUnsupportedForOracle, "move-result without a result");
        write(r[0], *result_);
        break;
      case 0x0d:
        reg(r[0]) = pending_exception_;
        break;
      case 0x0e: return returned(std::nullopt);
      case 0x0f: case 0x11: return returned(read(r[0], ret_kind));
      case 0x10: return returned(read(r[0], ret_kind));
      case 0x12: case 0x13: case 0x14: case 0x15: reg(r[0]) = static_cast<uint32_t>(*ins.literal); break;
      case 0x16: case 0x17: case 0x18: case 0x19: write(r[0], RtValue::j(*ins.literal)); break;
      case 0x1a: case 0x1b: reg(r[0]) = heap_.intern_string(pool_string(ins)); break;
      case 0x1c: reg(r[0]) = heap_.class_object(pool_type(ins)); break;
      case 0x1d: case 0x1e: non_null(reg(r[0])); break;
      case 0x1f: {
        const RtValue v{'L', reg(r[0])};
        if (v.bits != 0 && !detail::instance_of(env_, heap_, v, pool_type(ins))) throw JavaThrow{detail::kClassCast};
        break;
      }
      case 0x20: reg(r[0]) = detail::instance_of(env_, heap_, {'L', reg(r[1])}, pool_type(ins)) ? 1 : 0; break;
      case 0x21: reg(r[0]) = static_cast<uint32_t>(heap_.at(non_null(reg(r[1]))).elements.size()); break;
      case 0x22: reg(r[0]) = heap_.allocate(pool_type(ins)); break;
      case 0x23: {
        const int32_t n = static_cast<int32_t>(reg(r[1]));
        if (n < 0) throw JavaThrow{detail::kNegativeSize};
        reg(r[0]) = heap_.new_array(pool_type(ins), static_cast<size_t>(n));
        break;
      }
      case 0x24: case 0x25: {
        const std::string type = pool_type(ins);
        const uint32_t h = heap_.new_array(type, r.size());
        for (size_t i = 0; i < r.size(); ++i) {
          heap_.at(h).elements[i] = detail::store_bits(type.substr(1), {kind_of(type.substr(1)), reg(r[i])});
        }
        result_ = RtValue::ref(h);
        pc = next;
        return std::nullopt;
      }
      case 0x26: {
        HeapObject& a = heap_.at(non_null(reg(r[0])));
        const auto& fill = std::get<isa::FillArrayPayload>(*ins.payload);
        if (fill.element_count() > a.elements.size()) throw JavaThrow{detail::kIndexOutOfBounds};
        const std::string elem = a.type.substr(1);
        for (uint32_t i = 0; i < fill.element_count(); ++i) {
          // Sign-extend the raw element to the register width first.
          uint64_t bits = fill.element_bits(i);
          if (fill.element_width == 1) bits = static_cast<uint64_t>(static_cast<int8_t>(bits));
          if (fill.element_width == 2) bits = static_cast<uint64_t>(static_cast<int16_t>(bits));
          a.elements[i] = detail::store_bits(elem, {kind_of(elem), bits});
        }
        break;
      }
      case 0x27: {
        const uint32_t ex = non_null(reg(r[0]));
        throw JavaThrow{heap_.at(ex).type, ex};
      }
      case 0x28: case 0x29: case 0x2a: jump(*ins.branch_target()); break;
      case 0x2b: case 0x2c: {
        const auto& sw = std::get<isa::SwitchPayload>(*ins.payload);
        const int32_t key = static_cast<int32_t>(reg(r[0]));
        if (sw.packed) {
          const int64_t slot = static_cast<int64_t>(key) - sw.first_key;
          if (slot >= 0 && slot < static_cast<int64_t>(sw.targets.size())) jump(static_cast<uint32_t>(sw.targets[slot]));
        } else {
          auto it = std::find(sw.keys.begin(), sw.keys.end(), key);
          if (it != sw.keys.end()) jump(static_cast<uint32_t>(sw.targets[it - sw.keys.begin()]));
        }
        break;
      }
      case 0x2d: case 0x2e: reg(r[0]) = detail::compare('F', op == 0x2e, read(r[1], 'F'), read(r[2], 'F')); break;
      case 0x2f: case 0x30: reg(r[0]) = detail::compare('D', op == 0x30, read(r[1], 'D'), read(r[2], 'D')); break;
      case 0x31: reg(r[0]) = detail::compare('J', false, read(r[1], 'J'), read(r[2], 'J')); break;
      case 0x32: case 0x33: case 0x34: case 0x35: case 0x36: case 0x37:
      case 0x38: case 0x39: case 0x3a: case 0x3b: case 0x3c: case 0x3d: {
        const bool zero = op >= 0x38;
        const int32_t a = static_cast<int32_t>(reg(r[0]));
        const int32_t b = zero ? 0 : static_cast<int32_t>(reg(r[1]));
        bool take = false;
        switch ((op - 0x32) % 6) {
          case 0: take = a == b; break;
          case 1: take = a != b; break;
          case 2: take = a < b; break;
          case 3: take = a >= b; break;
          case 4: take = a > b; break;
          case 5: take = a <= b; break;
        }
        if (take) jump(*ins.branch_target());
        break;
      }
      case 0x44: case 0x45: case 0x46: case 0x47: case 0x48: case 0x49: case 0x4a: {
        size_t i = 0;
        HeapObject& a = array(r[1], r[2], &i);
        const std::string elem = a.type.substr(1);
        const uint64_t bits = a.elements[i];
        write(r[0], {(elem == "J" || elem == "D") ? 'J' : 'I', bits});
        break;
      }
      case 0x4b: case 0x4c: case 0x4d: case 0x4e: case 0x4f: case 0x50: case 0x51: {
        size_t i = 0;
        HeapObject& a = array(r[1], r[2], &i);
        const std::string elem = a.type.substr(1);
        const RtValue v = read(r[0], kAccessKinds[op - 0x4b] == 'J' ? 'J' : 'I');
        if (op == 0x4d && v.bits != 0 && !detail::instance_of(env_, heap_, {'L', v.bits}, elem)) {
          throw JavaThrow{"Ljava/lang/ArrayStoreException;"};
        }
        a.elements[i] = detail::store_bits(elem, v);
        break;
      }
      case 0x52: case 0x53: case 0x54: case 0x55: case 0x56: case 0x57: case 0x58:
      case 0x59: case 0x5a: case 0x5b: case 0x5c: case 0x5d: case 0x5e: case 0x5f: {
        const dex::FieldRef& f = dex::resolve_field(dex_, ins.pool_index->index);
        HeapObject& obj = heap_.at(non_null(reg(r[1])));
        field_access(op >= 0x59, obj.fields, f, r[0]);
        break;
      }
      case 0x60: case 0x61: case 0x62: case 0x63: case 0x64: case 0x65: case 0x66:
      case 0x67: case 0x68: case 0x69: case 0x6a: case 0x6b: case 0x6c: case 0x6d: {
        const dex::FieldRef& f = dex::resolve_field(dex_, ins.pool_index->index);
        field_access(op >= 0x67, heap_.statics, f, r[0]);
        break;
      }
      case 0x6e: case 0x6f: case 0x70: case 0x71: case 0x72:
      case 0x74: case 0x75: case 0x76: case 0x77: case 0x78:
        invoke(ins);
        pc = next;
        return std::nullopt;  // keeps result_ for move-result
      default:
        if (op >= 0x7b && op <= 0x8f) {
          unop(op, r[0], r[1]);
        } else if (op >= 0x90 && op <= 0xcf) {
          binop(op, r);
        } else if (op >= 0xd0 && op <= 0xe2) {
          litop(op, r[0], r[1], static_cast<int32_t>(*ins.literal));
        } else {
          fail(ErrorCode::kUnsupportedForOracle, "opcode " + std::to_string(op) + " outside the oracle subset");
        }
    }
    result_.reset();
    pc = next;
    return std::nullopt;
  }

  void field_access(bool store, std::map<std::string, uint64_t>& slots, const dex::FieldRef& f, uint32_t r) {
    const std::string key = f.to_string();
    const char kind = kind_of(f.type);
    if (store) {
      slots[key] = detail::store_bits(f.type, read(r, kind));
    } else {
      write(r, detail::load_value(f.type, slots[key]));
    }
  }

  void unop(uint8_t op, uint32_t dst, uint32_t src) {
    // neg-int not-int neg-long not-long neg-float neg-double, then the
    // conversions in order.
    static constexpr struct {
      char from, to;
    } kConversions[] = {{'I', 'J'}, {'I', 'F'}, {'I', 'D'}, {'J', 'I'}, {'J', 'F'}, {'J', 'D'}, {'F', 'I'},
                        {'F', 'J'}, {'F', 'D'}, {'D', 'I'}, {'D', 'J'}, {'D', 'F'}, {'I', 'B'}, {'I', 'C'},
                        {'I', 'S'}};
    switch (op) {
      case 0x7b: write(dst, detail::negate('I', read(src, 'I'))); return;
      case 0x7c: write(dst, RtValue::i(~static_cast<int32_t>(reg(src)))); return;
      case 0x7d: write(dst, detail::negate('J', read(src, 'J'))); return;
      case 0x7e: write(dst, RtValue{'J', ~read(src, 'J').bits}); return;
      case 0x7f: write(dst, detail::negate('F', read(src, 'F'))); return;
      case 0x80: write(dst, detail::negate('D', read(src, 'D'))); return;
      default: {
        const auto c = kConversions[op - 0x81];
        write(dst, detail::convert(c.from, c.to, read(src, c.from)));
      }
    }
  }

  void binop(uint8_t op, const std::vector<uint32_t>& r) {
    const bool two_addr = op >= 0xb0;
    const int k = op - (two_addr ? 0xb0 : 0x90);
    char kind;
    int index;
    if (k < 11) {
      kind = 'I', index = k;
    } else if (k < 22) {
      kind = 'J', index = k - 11;
    } else if (k < 27) {
      kind = 'F', index = k - 22;
    } else {
      kind = 'D', index = k - 27;
    }
    const Arith a = kArithOrder[index];
    const uint32_t dst = r[0];
    const uint32_t lhs = two_addr ? r[0] : r[1];
    const uint32_t rhs = two_addr ? r[1] : r[2];
    const bool shift = a == Arith::kShl || a == Arith::kShr || a == Arith::kUshr;
    write(dst, detail::arith(a, kind, read(lhs, kind), read(rhs, shift ? 'I' : kind)));
  }

  void litop(uint8_t op, uint32_t dst, uint32_t src, int32_t lit) {
    // lit16: add rsub mul div rem and or xor; lit8 adds shl shr ushr.
    const int k = op >= 0xd8 ? op - 0xd8 : op - 0xd0;
    const RtValue v = read(src, 'I');
    const RtValue l = RtValue::i(lit);
    if (k == 1) {
      write(dst, detail::arith(Arith::kSub, 'I', l, v));
      return;
    }
    write(dst, detail::arith(kArithOrder[k], 'I', v, l));
  }

  const dex::DexFile& dex_;
  const dex::MethodDef& method_;
  const dex::MethodRef& ref_;
  const Env& env_;
  Heap& heap_;
  const dex::CodeItem* code_ = nullptr;
  std::vector<isa::Instruction> instructions_;
  std::map<uint32_t, size_t> index_;
  std::vector<uint32_t> regs_;
  std::optional<RtValue> result_;
  uint32_t pending_exception_ = 0;
  std::vector<std::string> trace_;
  uint64_t steps_ = 0;
};

}  // namespace

Outcome exec_dalvik(const dex::DexFile& dex, const dex::MethodDef& method, const std::vector<RtValue>& args,
                    const Env& env, Heap& heap) {
  return DalvikMachine(dex, method, env, heap).run(args);
}

}  // namespace dexlift::refinterp
