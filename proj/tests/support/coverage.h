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

// One small method per standard opcode, for mapping coverage.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dexlift::testing {

struct OpcodeExercise {
  uint8_t opcode = 0;
  std::string signature = "()V";
  uint16_t registers = 8;
  std::string code;  // assembler text containing the opcode once
};

OpcodeExercise opcode_exercise(uint8_t opcode);

// Class LCov; with method op_XX for every standard opcode XX.
std::vector<uint8_t> coverage_dex();

}  // namespace dexlift::testing
