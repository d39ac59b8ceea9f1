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
#include <string>
#include <unordered_map>
#include <vector>

#include "dexlift/dex/dex_file.h"
#include "dexlift/ir/ir.h"
#include "dexlift/isa/instruction.h"

namespace dexlift::lift {

// Lifting templates named in the mapping table's rule column.
enum class Rule {
  kNop,
  kMove,
  kMoveResult,
  kMoveException,
  kReturnVoid,
  kReturn,
  kConst,
  kConstString,
  kConstClass,
  kMonitorEnter,
  kMonitorExit,
  kCheckCast,
  kInstanceOf,
  kArrayLength,
  kNewInstance,
  kNewArray,
  kFilledNewArray,
  kFillArrayData,
  kThrow,
  kGoto,
  kPackedSwitch,
  kSparseSwitch,
  kCmp,
  kIf,
  kIfz,
  kAget,
  kAput,
  kIget,
  kIput,
  kSget,
  kSput,
  kInvoke,
  kNeg,
  kNot,
  kConvert,
  kBinop,
  kBinop2Addr,
  kBinopLit,
};

struct MappingRow {
  uint8_t opcode = 0;
  std::string mnemonic;
  Rule rule = Rule::kNop;
  std::string rule_name;
  std::string op;    // operator, comparison or invoke kind; "-" when unused
  std::string type;  // operand type or width class; "-" when unused
};

// The table shipped in data/mapping_table.tsv, parsed and checked against
// the opcode table on first use: one row per standard opcode, mnemonics
// agreeing.
const std::vector<MappingRow>& mapping_table();
// Throws UnsupportedOpcode (odex) or UnknownOpcode (unused).
const MappingRow& mapping_for(uint8_t opcode);

// Register reads and writes of one instruction. Wide accesses cover the
// named register and the one above it.
struct RegisterAccess {
  uint32_t reg = 0;
  bool wide = false;
};
struct RegisterEffects {
  std::vector<RegisterAccess> uses;
  std::optional<RegisterAccess> def;
};
RegisterEffects register_effects(const isa::Instruction& ins, const dex::DexFile& dex);

// Register -> local assignment for one method. Registers are split into
// def-use webs: every definition reaching a common use shares a local, and
// otherwise each definition site gets its own. The first web of register N
// is named vN, later ones vN_2, vN_3, ...
class RegisterMap {
 public:
  // Builds the webs and adds one local per web to body.
  static RegisterMap build(const dex::CodeItem& code, const std::vector<isa::Instruction>& instructions,
                           const dex::DexFile& dex, const dex::MethodRef& method, bool is_static, ir::Body& body);

  // Local read from reg by instruction i (index into the instruction list).
  ir::LocalId use(size_t i, uint32_t reg) const;
  // Local written by instruction i.
  ir::LocalId def(size_t i) const;
  // Locals bound by the entry Identity statements: this, then parameters.
  const std::vector<ir::LocalId>& parameter_locals() const { return parameters_; }
  // For invoke / filled-new-array at index i: the local its following
  // move-result writes, if there is one.
  std::optional<ir::LocalId> result_of(size_t i) const;

 private:
  std::unordered_map<uint64_t, ir::LocalId> uses_;
  std::unordered_map<size_t, ir::LocalId> defs_;
  std::unordered_map<size_t, ir::LocalId> results_;
  std::vector<ir::LocalId> parameters_;
};

// A branch slot of a mapped statement (see ir::branch_targets for slot
// order) and the Dalvik address it must reach.
struct BranchRef {
  size_t statement = 0;
  size_t slot = 0;
  uint32_t target_address = 0;
};

struct MappedInstruction {
  std::vector<ir::StmtNode> statements;
  std::vector<BranchRef> branches;
};

struct LiftContext {
  const dex::DexFile* dex = nullptr;
  const std::vector<isa::Instruction>* instructions = nullptr;
  ir::Body* body = nullptr;  // receives temporaries
};

// Maps instruction i of ctx.instructions to IR statements with unresolved
// branch targets. move-result and nop produce nothing.
MappedInstruction map_instruction(size_t i, const RegisterMap& regs, const LiftContext& ctx);

// A jump placed on the entry Nop until its target address is lifted.
struct PendingJump {
  ir::Statement* jump = nullptr;
  size_t slot = 0;
  uint32_t target_address = 0;
};

// Retargets every pending jump through body.addr_map. Throws DanglingTarget
// when the address has no statement.
void resolve_branches(ir::Body& body, const std::vector<PendingJump>& pending);

// Lifts one method body to untyped IR: entry Nop, Identity prefix, mapped
// statements, traps and the address map. Locals are Unknown-typed except
// the Identity-bound ones, which take their types from the signature.
ir::Body lift_method(const dex::DexFile& dex, const dex::MethodDef& method, const dex::CodeItem& code);

// Same, for a method given by reference (used by tools and tests).
ir::Body lift_code(const dex::DexFile& dex, const dex::MethodRef& method, bool is_static,
                   const dex::CodeItem& code);

}  // namespace dexlift::lift
