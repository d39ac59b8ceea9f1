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

#include <cstdio>
#include <sstream>

#include "dexlift/isa/instruction.h"

namespace dexlift::isa {
namespace {

std::string hex_address(uint64_t address, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*llx", digits, static_cast<unsigned long long>(address));
  return buf;
}

bool is_wide_literal(uint8_t op) { return op >= 0x16 && op <= 0x19; }

std::string pool_text(const PoolRef& ref, const PoolResolver& resolver) {
  if (resolver) return resolver(ref.kind, ref.index);
  static constexpr const char* kNames[] = {"none", "string", "type", "field", "method"};
  return std::string(kNames[static_cast<int>(ref.kind)]) + "@" + std::to_string(ref.index);
}

std::string payload_text(const Instruction& ins) {
  std::ostringstream os;
  if (const auto* sw = std::get_if<SwitchPayload>(&*ins.payload)) {
    if (sw->packed) {
      os << "packed-switch-payload first_key=" << sw->first_key << " targets=" << sw->targets.size();
    } else {
      os << "sparse-switch-payload entries=" << sw->keys.size();
    }
  } else {
    const auto& fill = std::get<FillArrayPayload>(*ins.payload);
    os << "array-payload width=" << fill.element_width << " count=" << fill.element_count();
  }
  return os.str();
}

}  // namespace

std::string format_instruction(const Instruction& ins, const PoolResolver& resolver) {
  if (ins.is_payload) return payload_text(ins);
  const Opcode& info = ins.info();
  std::ostringstream os;
  os << info.mnemonic;
  std::vector<std::string> args;
  if (info.format == Format::k35c || info.format == Format::k3rc) {
    std::string list = "{";
    if (info.format == Format::k3rc && !ins.registers.empty()) {
      list += "v" + std::to_string(ins.registers.front()) + " .. v" + std::to_string(ins.registers.back());
    } else {
      for (size_t i = 0; i < ins.registers.size(); ++i) {
        if (i) list += ", ";
        list += "v" + std::to_string(ins.registers[i]);
      }
    }
    args.push_back(list + "}");
  } else {
    for (uint32_t r : ins.registers) args.push_back("v" + std::to_string(r));
  }
  if (ins.literal) {
    args.push_back(std::string(is_wide_literal(ins.opcode) ? "#long " : "#int ") + std::to_string(*ins.literal));
  }
  if (ins.branch_offset) args.push_back(hex_address(*ins.branch_target(), 4));
  if (ins.pool_index) args.push_back(pool_text(*ins.pool_index, resolver));
  for (size_t i = 0; i < args.size(); ++i) os << (i ? ", " : " ") << args[i];
  return os.str();
}

std::string disassemble(std::span<const Instruction> instructions, const PoolResolver& resolver) {
  std::string out;
  for (const Instruction& ins : instructions) {
    out += hex_address(ins.address, 2) + ": " + format_instruction(ins, resolver) + "\n";
  }
  return out;
}

}  // namespace dexlift::isa
