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
#include <optional>
#include <string_view>

namespace dexlift::isa {

// Instruction formats of the dex-035 instruction set. The name encodes the
// size in code units, the register count and the kind of extra operand.
enum class Format : uint8_t {
  k10x,
  k12x,
  k11n,
  k11x,
  k10t,
  k20t,
  k22x,
  k21t,
  k21s,
  k21h,
  k21c,
  k23x,
  k22b,
  k22t,
  k22s,
  k22c,
  k30t,
  k32x,
  k31i,
  k31t,
  k31c,
  k35c,
  k3rc,
  k51l,
};

inline constexpr int kFormatCount = 24;

enum class Group : uint8_t {
  kMove,         // 0x01-0x1c: moves, returns and constants
  kBranch,       // 0x27-0x3d: throw, goto, switches, compares, ifs
  kFieldAccess,  // 0x44-0x6d: array, instance and static getters/setters
  kInvoke,       // 0x6e-0x78
  kArithLogic,   // 0x7b-0xe2
  kOther,        // nop, monitors, casts, allocation, array fill
};

enum class OpKind : uint8_t { kNormal, kOdex, kUnused };

enum class PoolKind : uint8_t { kNone, kString, kType, kField, kMethod };

struct Opcode {
  uint8_t value;
  std::string_view mnemonic;
  Format format;
  Group group;
  OpKind kind;
  PoolKind pool;
};

// Total over 0x00-0xff.
const Opcode& opcode_info(uint8_t value);

std::optional<uint8_t> opcode_by_mnemonic(std::string_view mnemonic);

// Size in 16-bit code units.
int format_width(Format format);
std::string_view format_name(Format format);
std::string_view group_name(Group group);

// Static properties of a format's operand fields.
struct FormatShape {
  int register_count;  // fixed registers; -1 for the variable-arity 35c/3rc
  int register_bits;   // width of the first register field
  int second_register_bits;
  bool has_literal;
  bool has_branch;
  bool has_pool_index;
};

FormatShape format_shape(Format format);

}  // namespace dexlift::isa
