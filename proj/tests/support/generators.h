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
#include <random>
#include <string>
#include <vector>

#include "dexlift/isa/instruction.h"

namespace dexlift::testing {

// Random instruction with every field inside its format's range. Payload
// owners (switches, fill-array-data) are excluded; see random_stream.
isa::Instruction random_instruction(std::mt19937_64& rng, uint8_t opcode);

// A well-formed method stream of `count` regular instructions: addresses
// assigned, branches aimed at instruction starts, and any payload tables
// appended after the code and linked onto their owners, exactly as
// decode_stream would produce them.
std::vector<isa::Instruction> random_stream(std::mt19937_64& rng, size_t count);

// Every opcode with kind normal, in value order.
std::vector<uint8_t> normal_opcodes();

// A random method over registers with fixed intended types:
//
//   v0 v1 int    v2 v3 float    v4 v5 String    v6 long    v8 double
//   v10 caught exception        v11 int param   v12 float param
//
// A switch on v11 makes every block reachable. Every block draws typed operations, constant loads of the matching kind
// (zeros for every kind, so null/0/0.0 stay ambiguous), comparisons and
// branches. Blocks 0..1 sit in a catch-all region whose handler returns -1.
// With acyclic set, branches only go forward, so every run terminates.
struct TypedProgram {
  std::string signature = "(IF)I";
  uint16_t registers = 13;
  std::string code;
  // Intended category per register: 'I', 'F', 'L' (reference), 'J', 'D',
  // 'E' (exception) or '-' for the upper half of a wide pair.
  std::string intended = "IIFFLLJ-D-EIF";
};
TypedProgram random_typed_program(std::mt19937_64& rng, int blocks, bool acyclic);

// Int-only program over v0..v3 with backward branches, a packed switch and
// a catch-all region. Signature ()I, four registers.
std::string random_int_program(std::mt19937_64& rng, int blocks);

}  // namespace dexlift::testing
