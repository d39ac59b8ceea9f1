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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dexlift/isa/opcodes.h"

namespace dexlift::isa {

// Switch table. Inside a payload pseudo-instruction the targets are the raw
// offsets relative to the owning switch; the copy linked onto the owning
// switch holds method-relative addresses instead.
struct SwitchPayload {
  bool packed = true;
  int32_t first_key = 0;      // packed only
  std::vector<int32_t> keys;  // sparse only, strictly increasing
  std::vector<int32_t> targets;

  bool operator==(const SwitchPayload&) const = default;
};

struct FillArrayPayload {
  uint16_t element_width = 1;
  std::vector<uint8_t> data;  // element_count * element_width bytes

  uint32_t element_count() const {
    return element_width == 0 ? 0 : static_cast<uint32_t>(data.size() / element_width);
  }
  // Little-endian element i, zero-extended.
  uint64_t element_bits(uint32_t i) const;

  bool operator==(const FillArrayPayload&) const = default;
};

using Payload = std::variant<SwitchPayload, FillArrayPayload>;

struct PoolRef {
  PoolKind kind = PoolKind::kNone;
  uint32_t index = 0;

  bool operator==(const PoolRef&) const = default;
};

struct Instruction {
  uint8_t opcode = 0;
  std::vector<uint32_t> registers;
  std::optional<int64_t> literal;
  std::optional<int32_t> branch_offset;
  std::optional<PoolRef> pool_index;
  uint32_t address = 0;
  uint32_t width = 0;
  // Payload tables decode as pseudo-instructions (opcode 0x00) so the
  // address sequence stays contiguous.
  bool is_payload = false;
  std::optional<Payload> payload;

  const Opcode& info() const { return opcode_info(opcode); }
  std::optional<uint32_t> branch_target() const {
    if (!branch_offset) return std::nullopt;
    return static_cast<uint32_t>(static_cast<int64_t>(address) + *branch_offset);
  }

  bool operator==(const Instruction&) const = default;
};

// Decodes a method's code units. Payload tables are linked onto their
// owning switch/fill-array-data instruction.
std::vector<Instruction> decode_stream(std::span<const uint16_t> units);

// Inverse of decode_stream; ignores linked payload copies on owners.
std::vector<uint16_t> encode(std::span<const Instruction> instructions);

// Code units the instruction occupies once encoded.
uint32_t encoded_width(const Instruction& instruction);

// Copies payload tables onto their owners, converting switch targets to
// method-relative addresses. decode_stream calls this.
void link_payloads(std::vector<Instruction>& instructions);

using PoolResolver = std::function<std::string(PoolKind, uint32_t)>;

// "mnemonic args" without the address prefix.
std::string format_instruction(const Instruction& instruction,
                               const PoolResolver& resolver = {});

// "addr: mnemonic args", one line per instruction.
std::string disassemble(std::span<const Instruction> instructions,
                        const PoolResolver& resolver = {});

}  // namespace dexlift::isa
