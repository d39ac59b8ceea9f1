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

#include <map>
#include <sstream>

#include "dexlift/error.h"
#include "dexlift/isa/instruction.h"

namespace dexlift::isa {
namespace {

constexpr uint16_t kPackedSwitchIdent = 0x0100;
constexpr uint16_t kSparseSwitchIdent = 0x0200;
constexpr uint16_t kFillArrayIdent = 0x0300;

std::string hex(uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

[[noreturn]] void fail_at(ErrorCode code, uint32_t address, const std::string& what) {
  Error e(code, what + " at " + hex(address));
  e.address = address;
  throw e;
}

class UnitReader {
 public:
  UnitReader(std::span<const uint16_t> units, uint32_t start)
      : units_(units), start_(start) {}

  void require(uint32_t count) const {
    if (static_cast<uint64_t>(start_) + count > units_.size()) {
      fail_at(ErrorCode::kTruncatedInstruction, start_, "instruction runs past end of code");
    }
  }
  uint16_t unit(uint32_t i) const { return units_[start_ + i]; }
  uint32_t u32(uint32_t i) const {
    return static_cast<uint32_t>(unit(i)) | (static_cast<uint32_t>(unit(i + 1)) << 16);
  }

 private:
  std::span<const uint16_t> units_;
  uint32_t start_;
};

Instruction decode_payload(std::span<const uint16_t> units, uint32_t address) {
  UnitReader r(units, address);
  Instruction ins;
  ins.opcode = 0x00;
  ins.address = address;
  ins.is_payload = true;
  const uint16_t ident = r.unit(0);
  r.require(2);
  const uint32_t size = r.unit(1);
  if (ident == kPackedSwitchIdent) {
    ins.width = 4 + size * 2;
    r.require(ins.width);
    SwitchPayload p;
    p.packed = true;
    p.first_key = static_cast<int32_t>(r.u32(2));
    for (uint32_t i = 0; i < size; ++i) p.targets.push_back(static_cast<int32_t>(r.u32(4 + 2 * i)));
    ins.payload = std::move(p);
  } else if (ident == kSparseSwitchIdent) {
    ins.width = 2 + size * 4;
    r.require(ins.width);
    SwitchPayload p;
    p.packed = false;
    for (uint32_t i = 0; i < size; ++i) p.keys.push_back(static_cast<int32_t>(r.u32(2 + 2 * i)));
    for (uint32_t i = 0; i < size; ++i) {
      p.targets.push_back(static_cast<int32_t>(r.u32(2 + 2 * size + 2 * i)));
    }
    for (size_t i = 1; i < p.keys.size(); ++i) {
      if (p.keys[i] <= p.keys[i - 1]) fail_at(ErrorCode::kBadPayload, address, "sparse-switch keys not increasing");
    }
    ins.payload = std::move(p);
  } else {
    const uint16_t element_width = static_cast<uint16_t>(size);
    r.require(4);
    const uint32_t count = r.u32(2);
    if (element_width != 1 && element_width != 2 && element_width != 4 && element_width != 8) {
      fail_at(ErrorCode::kBadPayload, address, "bad fill-array-data element width");
    }
    const uint64_t bytes = static_cast<uint64_t>(count) * element_width;
    const uint64_t width = 4 + (bytes + 1) / 2;
    if (width > units.size()) fail_at(ErrorCode::kTruncatedInstruction, address, "payload runs past end of code");
    ins.width = static_cast<uint32_t>(width);
    r.require(ins.width);
    FillArrayPayload p;
    p.element_width = element_width;
    p.data.reserve(bytes);
    for (uint64_t b = 0; b < bytes; ++b) {
      const uint16_t u = r.unit(4 + static_cast<uint32_t>(b / 2));
      p.data.push_back(static_cast<uint8_t>(b % 2 == 0 ? u & 0xff : u >> 8));
    }
    ins.payload = std::move(p);
  }
  return ins;
}

int64_t sign_extend(uint64_t value, int bits) {
  const uint64_t m = uint64_t{1} << (bits - 1);
  value &= (bits == 64) ? ~uint64_t{0} : ((uint64_t{1} << bits) - 1);
  return static_cast<int64_t>((value ^ m) - m);
}

Instruction decode_one(std::span<const uint16_t> units, uint32_t address) {
  UnitReader r(units, address);
  const uint16_t first = r.unit(0);
  const uint8_t op = static_cast<uint8_t>(first & 0xff);
  if (op == 0x00 && (first == kPackedSwitchIdent || first == kSparseSwitchIdent ||
                     first == kFillArrayIdent)) {
    return decode_payload(units, address);
  }
  const Opcode& info = opcode_info(op);
  if (info.kind == OpKind::kOdex) {
    Error e(ErrorCode::kUnsupportedOpcode,
            "unsupported optimized (odex) opcode " + hex(op) + " (" + std::string(info.mnemonic) +
                ") at " + hex(address));
    e.address = address;
    e.opcode = op;
    throw e;
  }
  if (info.kind == OpKind::kUnused) {
    Error e(ErrorCode::kUnknownOpcode, "unused opcode " + hex(op) + " at " + hex(address));
    e.address = address;
    e.opcode = op;
    throw e;
  }
  Instruction ins;
  ins.opcode = op;
  ins.address = address;
  ins.width = static_cast<uint32_t>(format_width(info.format));
  r.require(ins.width);
  const uint32_t aa = first >> 8;
  const uint32_t a4 = (first >> 8) & 0xf;
  const uint32_t b4 = first >> 12;
  auto pool = [&](uint32_t index) { ins.pool_index = PoolRef{info.pool, index}; };

  switch (info.format) {
    case Format::k10x:
      break;
    case Format::k12x:
      ins.registers = {a4, b4};
      break;
    case Format::k11n:
      ins.registers = {a4};
      ins.literal = sign_extend(b4, 4);
      break;
    case Format::k11x:
      ins.registers = {aa};
      break;
    case Format::k10t:
      ins.branch_offset = static_cast<int32_t>(sign_extend(aa, 8));
      break;
    case Format::k20t:
      ins.branch_offset = static_cast<int32_t>(sign_extend(r.unit(1), 16));
      break;
    case Format::k22x:
      ins.registers = {aa, r.unit(1)};
      break;
    case Format::k21t:
      ins.registers = {aa};
      ins.branch_offset = static_cast<int32_t>(sign_extend(r.unit(1), 16));
      break;
    case Format::k21s:
      ins.registers = {aa};
      ins.literal = sign_extend(r.unit(1), 16);
      break;
    case Format::k21h:
      ins.registers = {aa};
      if (op == 0x15) {  // const/high16
        ins.literal = static_cast<int32_t>(static_cast<uint32_t>(r.unit(1)) << 16);
      } else {           // const-wide/high16
        ins.literal = static_cast<int64_t>(static_cast<uint64_t>(r.unit(1)) << 48);
      }
      break;
    case Format::k21c:
      ins.registers = {aa};
      pool(r.unit(1));
      break;
    case Format::k23x:
      ins.registers = {aa, static_cast<uint32_t>(r.unit(1) & 0xff),
                       static_cast<uint32_t>(r.unit(1) >> 8)};
      break;
    case Format::k22b:
      ins.registers = {aa, static_cast<uint32_t>(r.unit(1) & 0xff)};
      ins.literal = sign_extend(r.unit(1) >> 8, 8);
      break;
    case Format::k22t:
      ins.registers = {a4, b4};
      ins.branch_offset = static_cast<int32_t>(sign_extend(r.unit(1), 16));
      break;
    case Format::k22s:
      ins.registers = {a4, b4};
      ins.literal = sign_extend(r.unit(1), 16);
      break;
    case Format::k22c:
      ins.registers = {a4, b4};
      pool(r.unit(1));
      break;
    case Format::k30t:
      ins.branch_offset = static_cast<int32_t>(r.u32(1));
      break;
    case Format::k32x:
      ins.registers = {r.unit(1), r.unit(2)};
      break;
    case Format::k31i:
      ins.registers = {aa};
      ins.literal = static_cast<int32_t>(r.u32(1));
      break;
    case Format::k31t:
      ins.registers = {aa};
      ins.branch_offset = static_cast<int32_t>(r.u32(1));
      break;
    case Format::k31c:
      ins.registers = {aa};
      pool(r.u32(1));
      break;
    case Format::k35c: {
      const uint32_t count = first >> 12;
      if (count > 5) fail_at(ErrorCode::kTruncatedInstruction, address, "35c argument count exceeds 5");
      const uint16_t regs = r.unit(2);
      const uint32_t all[5] = {static_cast<uint32_t>(regs & 0xf), static_cast<uint32_t>((regs >> 4) & 0xf),
                               static_cast<uint32_t>((regs >> 8) & 0xf), static_cast<uint32_t>(regs >> 12),
                               a4};
      ins.registers.assign(all, all + count);
      pool(r.unit(1));
      break;
    }
    case Format::k3rc: {
      const uint32_t base = r.unit(2);
      for (uint32_t i = 0; i < aa; ++i) ins.registers.push_back(base + i);
      pool(r.unit(1));
      break;
    }
    case Format::k51l: {
      ins.registers = {aa};
      const uint64_t lit = static_cast<uint64_t>(r.u32(1)) | (static_cast<uint64_t>(r.u32(3)) << 32);
      ins.literal = static_cast<int64_t>(lit);
      break;
    }
  }
  return ins;
}

[[noreturn]] void overflow(const Instruction& ins, const std::string& what) {
  Error e(ErrorCode::kFieldOverflow, std::string(ins.info().mnemonic) + ": " + what);
  e.address = ins.address;
  e.opcode = ins.opcode;
  throw e;
}

bool fits_signed(int64_t v, int bits) {
  if (bits >= 64) return true;
  const int64_t lo = -(int64_t{1} << (bits - 1));
  const int64_t hi = (int64_t{1} << (bits - 1)) - 1;
  return v >= lo && v <= hi;
}

void check_register(const Instruction& ins, uint32_t reg, int bits) {
  if (bits < 32 && reg >= (uint32_t{1} << bits)) {
    overflow(ins, "register v" + std::to_string(reg) + " exceeds " + std::to_string(bits) + "-bit field");
  }
}

void encode_payload(const Instruction& ins, std::vector<uint16_t>& out) {
  auto put32 = [&](uint32_t v) {
    out.push_back(static_cast<uint16_t>(v & 0xffff));
    out.push_back(static_cast<uint16_t>(v >> 16));
  };
  if (!ins.payload) overflow(ins, "payload pseudo-instruction without a table");
  if (const auto* sw = std::get_if<SwitchPayload>(&*ins.payload)) {
    if (sw->targets.size() > 0xffff) overflow(ins, "switch table too large");
    if (sw->packed) {
      out.push_back(kPackedSwitchIdent);
      out.push_back(static_cast<uint16_t>(sw->targets.size()));
      put32(static_cast<uint32_t>(sw->first_key));
      for (int32_t t : sw->targets) put32(static_cast<uint32_t>(t));
    } else {
      if (sw->keys.size() != sw->targets.size()) overflow(ins, "sparse-switch key/target mismatch");
      out.push_back(kSparseSwitchIdent);
      out.push_back(static_cast<uint16_t>(sw->targets.size()));
      for (int32_t k : sw->keys) put32(static_cast<uint32_t>(k));
      for (int32_t t : sw->targets) put32(static_cast<uint32_t>(t));
    }
    return;
  }
  const auto& fill = std::get<FillArrayPayload>(*ins.payload);
  if (fill.element_width == 0 || fill.data.size() % fill.element_width != 0) {
    overflow(ins, "fill-array-data size is not a multiple of the element width");
  }
  out.push_back(kFillArrayIdent);
  out.push_back(fill.element_width);
  put32(fill.element_count());
  for (size_t i = 0; i < fill.data.size(); i += 2) {
    const uint16_t lo = fill.data[i];
    const uint16_t hi = i + 1 < fill.data.size() ? fill.data[i + 1] : 0;
    out.push_back(static_cast<uint16_t>(lo | (hi << 8)));
  }
}

void encode_one(const Instruction& ins, std::vector<uint16_t>& out) {
  if (ins.is_payload) {
    encode_payload(ins, out);
    return;
  }
  const Opcode& info = ins.info();
  if (info.kind != OpKind::kNormal) overflow(ins, "cannot encode non-standard opcode");
  const FormatShape shape = format_shape(info.format);
  const auto& regs = ins.registers;
  if (shape.register_count >= 0 && regs.size() != static_cast<size_t>(shape.register_count)) {
    overflow(ins, "wrong register count");
  }
  if (shape.has_literal != ins.literal.has_value()) overflow(ins, "literal presence mismatch");
  if (shape.has_branch != ins.branch_offset.has_value()) overflow(ins, "branch presence mismatch");
  if (shape.has_pool_index != ins.pool_index.has_value()) overflow(ins, "pool index presence mismatch");
  const uint16_t op = info.value;
  const int64_t lit = ins.literal.value_or(0);
  const int32_t off = ins.branch_offset.value_or(0);
  const uint32_t idx = ins.pool_index ? ins.pool_index->index : 0;
  auto need_lit = [&](int bits) {
    if (!fits_signed(lit, bits)) overflow(ins, "literal " + std::to_string(lit) + " exceeds field");
  };
  auto need_off = [&](int bits) {
    if (!fits_signed(off, bits)) overflow(ins, "branch offset exceeds field");
  };
  auto need_idx16 = [&] {
    if (idx > 0xffff) overflow(ins, "pool index exceeds 16-bit field");
  };
  auto unit_aa = [&](uint32_t aa) { return static_cast<uint16_t>(op | (aa << 8)); };
  auto unit_ba = [&](uint32_t a, uint32_t b) { return static_cast<uint16_t>(op | (a << 8) | (b << 12)); };
  auto put32 = [&](uint32_t v) {
    out.push_back(static_cast<uint16_t>(v & 0xffff));
    out.push_back(static_cast<uint16_t>(v >> 16));
  };
  if (shape.register_count > 0) check_register(ins, regs[0], shape.register_bits);
  if (shape.register_count > 1) check_register(ins, regs[1], shape.second_register_bits);
  if (shape.register_count > 2) check_register(ins, regs[2], 8);

  switch (info.format) {
    case Format::k10x:
      out.push_back(op);
      break;
    case Format::k12x:
      out.push_back(unit_ba(regs[0], regs[1]));
      break;
    case Format::k11n:
      need_lit(4);
      out.push_back(unit_ba(regs[0], static_cast<uint32_t>(lit) & 0xf));
      break;
    case Format::k11x:
      out.push_back(unit_aa(regs[0]));
      break;
    case Format::k10t:
      need_off(8);
      out.push_back(unit_aa(static_cast<uint32_t>(off) & 0xff));
      break;
    case Format::k20t:
      need_off(16);
      out.push_back(op);
      out.push_back(static_cast<uint16_t>(off));
      break;
    case Format::k22x:
      out.push_back(unit_aa(regs[0]));
      out.push_back(static_cast<uint16_t>(regs[1]));
      break;
    case Format::k21t:
      need_off(16);
      out.push_back(unit_aa(regs[0]));
      out.push_back(static_cast<uint16_t>(off));
      break;
    case Format::k21s:
      need_lit(16);
      out.push_back(unit_aa(regs[0]));
      out.push_back(static_cast<uint16_t>(lit));
      break;
    case Format::k21h: {
      uint16_t high;
      if (op == 0x15) {
        if (!fits_signed(lit, 32) || (lit & 0xffff) != 0) overflow(ins, "const/high16 literal has low bits set");
        high = static_cast<uint16_t>(static_cast<uint32_t>(lit) >> 16);
      } else {
        if ((static_cast<uint64_t>(lit) & 0xffffffffffffULL) != 0) {
          overflow(ins, "const-wide/high16 literal has low bits set");
        }
        high = static_cast<uint16_t>(static_cast<uint64_t>(lit) >> 48);
      }
      out.push_back(unit_aa(regs[0]));
      out.push_back(high);
      break;
    }
    case Format::k21c:
      need_idx16();
      out.push_back(unit_aa(regs[0]));
      out.push_back(static_cast<uint16_t>(idx));
      break;
    case Format::k23x:
      out.push_back(unit_aa(regs[0]));
      out.push_back(static_cast<uint16_t>(regs[1] | (regs[2] << 8)));
      break;
    case Format::k22b:
      need_lit(8);
      out.push_back(unit_aa(regs[0]));
      out.push_back(static_cast<uint16_t>(regs[1] | ((static_cast<uint32_t>(lit) & 0xff) << 8)));
      break;
    case Format::k22t:
      need_off(16);
      out.push_back(unit_ba(regs[0], regs[1]));
      out.push_back(static_cast<uint16_t>(off));
      break;
    case Format::k22s:
      need_lit(16);
      out.push_back(unit_ba(regs[0], regs[1]));
      out.push_back(static_cast<uint16_t>(lit));
      break;
    case Format::k22c:
      need_idx16();
      out.push_back(unit_ba(regs[0], regs[1]));
      out.push_back(static_cast<uint16_t>(idx));
      break;
    case Format::k30t:
      out.push_back(op);
      put32(static_cast<uint32_t>(off));
      break;
    case Format::k32x:
      out.push_back(op);
      out.push_back(static_cast<uint16_t>(regs[0]));
      out.push_back(static_cast<uint16_t>(regs[1]));
      break;
    case Format::k31i:
      need_lit(32);
      out.push_back(unit_aa(regs[0]));
      put32(static_cast<uint32_t>(lit));
      break;
    case Format::k31t:
      out.push_back(unit_aa(regs[0]));
      put32(static_cast<uint32_t>(off));
      break;
    case Format::k31c:
      out.push_back(unit_aa(regs[0]));
      put32(idx);
      break;
    case Format::k35c: {
      if (regs.size() > 5) overflow(ins, "more than 5 argument registers");
      need_idx16();
      uint32_t nib[5] = {0, 0, 0, 0, 0};
      for (size_t i = 0; i < regs.size(); ++i) {
        check_register(ins, regs[i], 4);
        nib[i] = regs[i];
      }
      out.push_back(static_cast<uint16_t>(op | (nib[4] << 8) | (regs.size() << 12)));
      out.push_back(static_cast<uint16_t>(idx));
      out.push_back(static_cast<uint16_t>(nib[0] | (nib[1] << 4) | (nib[2] << 8) | (nib[3] << 12)));
      break;
    }
    case Format::k3rc: {
      if (regs.size() > 0xff) overflow(ins, "more than 255 argument registers");
      need_idx16();
      const uint32_t base = regs.empty() ? 0 : regs[0];
      for (size_t i = 0; i < regs.size(); ++i) {
        if (regs[i] != base + i) overflow(ins, "range registers are not consecutive");
      }
      if (base + regs.size() > 0x10000) overflow(ins, "register range exceeds 16-bit field");
      out.push_back(unit_aa(static_cast<uint32_t>(regs.size())));
      out.push_back(static_cast<uint16_t>(idx));
      out.push_back(static_cast<uint16_t>(base));
      break;
    }
    case Format::k51l: {
      out.push_back(unit_aa(regs[0]));
      const auto v = static_cast<uint64_t>(lit);
      put32(static_cast<uint32_t>(v));
      put32(static_cast<uint32_t>(v >> 32));
      break;
    }
  }
}

}  // namespace

uint64_t FillArrayPayload::element_bits(uint32_t i) const {
  uint64_t v = 0;
  for (uint16_t b = 0; b < element_width; ++b) {
    v |= static_cast<uint64_t>(data[static_cast<size_t>(i) * element_width + b]) << (8 * b);
  }
  return v;
}

std::vector<Instruction> decode_stream(std::span<const uint16_t> units) {
  std::vector<Instruction> out;
  uint32_t address = 0;
  while (address < units.size()) {
    Instruction ins = decode_one(units, address);
    address += ins.width;
    out.push_back(std::move(ins));
  }
  link_payloads(out);
  return out;
}

void link_payloads(std::vector<Instruction>& instructions) {
  std::map<uint32_t, const Instruction*> by_address;
  for (const Instruction& ins : instructions) by_address[ins.address] = &ins;
  for (Instruction& ins : instructions) {
    if (ins.is_payload) continue;
    const uint8_t op = ins.opcode;
    if (op != 0x26 && op != 0x2b && op != 0x2c) continue;
    const auto target = ins.branch_target();
    auto it = target ? by_address.find(*target) : by_address.end();
    if (it == by_address.end() || !it->second->is_payload || !it->second->payload) {
      fail_at(ErrorCode::kBadPayload, ins.address, std::string(ins.info().mnemonic) + " does not point at a payload");
    }
    const Payload& table = *it->second->payload;
    if (op == 0x26) {
      if (!std::holds_alternative<FillArrayPayload>(table)) {
        fail_at(ErrorCode::kBadPayload, ins.address, "fill-array-data points at a switch table");
      }
      ins.payload = table;
      continue;
    }
    const auto* sw = std::get_if<SwitchPayload>(&table);
    if (sw == nullptr || sw->packed != (op == 0x2b)) {
      fail_at(ErrorCode::kBadPayload, ins.address, "switch points at the wrong payload kind");
    }
    SwitchPayload linked = *sw;
    for (int32_t& t : linked.targets) t = static_cast<int32_t>(static_cast<int64_t>(ins.address) + t);
    ins.payload = std::move(linked);
  }
}

std::vector<uint16_t> encode(std::span<const Instruction> instructions) {
  std::vector<uint16_t> out;
  for (const Instruction& ins : instructions) encode_one(ins, out);
  return out;
}

uint32_t encoded_width(const Instruction& instruction) {
  if (!instruction.is_payload) return static_cast<uint32_t>(format_width(instruction.info().format));
  std::vector<uint16_t> units;
  encode_one(instruction, units);
  return static_cast<uint32_t>(units.size());
}

}  // namespace dexlift::isa
