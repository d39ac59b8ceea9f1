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

#include <array>
#include <sstream>
#include <string_view>
#include <utility>

#include "dexlift/error.h"
#include "dexlift/isa/opcodes.h"
#include "dexlift/lift/lifter.h"

namespace dexlift::lift {

extern const char kMappingTableTsv[];

namespace {

constexpr std::array<std::pair<std::string_view, Rule>, 38> kRuleNames = {{
    {"nop", Rule::kNop},
    {"move", Rule::kMove},
    {"move-result", Rule::kMoveResult},
    {"move-exception", Rule::kMoveException},
    {"return-void", Rule::kReturnVoid},
    {"return", Rule::kReturn},
    {"const", Rule::kConst},
    {"const-string", Rule::kConstString},
    {"const-class", Rule::kConstClass},
    {"monitor-enter", Rule::kMonitorEnter},
    {"monitor-exit", Rule::kMonitorExit},
    {"check-cast", Rule::kCheckCast},
    {"instance-of", Rule::kInstanceOf},
    {"array-length", Rule::kArrayLength},
    {"new-instance", Rule::kNewInstance},
    {"new-array", Rule::kNewArray},
    {"filled-new-array", Rule::kFilledNewArray},
    {"fill-array-data", Rule::kFillArrayData},
    {"throw", Rule::kThrow},
    {"goto", Rule::kGoto},
    {"packed-switch", Rule::kPackedSwitch},
    {"sparse-switch", Rule::kSparseSwitch},
    {"cmp", Rule::kCmp},
    {"if", Rule::kIf},
    {"ifz", Rule::kIfz},
    {"aget", Rule::kAget},
    {"aput", Rule::kAput},
    {"iget", Rule::kIget},
    {"iput", Rule::kIput},
    {"sget", Rule::kSget},
    {"sput", Rule::kSput},
    {"invoke", Rule::kInvoke},
    {"neg", Rule::kNeg},
    {"not", Rule::kNot},
    {"convert", Rule::kConvert},
    {"binop", Rule::kBinop},
    {"binop2addr", Rule::kBinop2Addr},
    {"binop-lit", Rule::kBinopLit},
}};

Rule rule_by_name(std::string_view name) {
  for (const auto& [n, r] : kRuleNames) {
    if (n == name) return r;
  }
  fail(ErrorCode::kBadString, "mapping table: unknown rule '" + std::string(name) + "'");
}

struct Table {
  std::vector<MappingRow> rows;
  std::array<int, 256> by_opcode{};
};

Table load() {
  Table t;
  t.by_opcode.fill(-1);
  std::istringstream in{std::string(kMappingTableTsv)};
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> cols;
    std::string col;
    std::istringstream ls(line);
    while (std::getline(ls, col, '\t')) cols.push_back(col);
    if (cols.size() != 5) fail(ErrorCode::kBadString, "mapping table: malformed row '" + line + "'");
    MappingRow row;
    const unsigned long op = std::stoul(cols[0], nullptr, 16);
    if (op > 0xff) fail(ErrorCode::kBadString, "mapping table: opcode out of range");
    row.opcode = static_cast<uint8_t>(op);
    row.mnemonic = cols[1];
    row.rule_name = cols[2];
    row.rule = rule_by_name(cols[2]);
    row.op = cols[3];
    row.type = cols[4];
    const auto& info = isa::opcode_info(row.opcode);
    if (info.kind != isa::OpKind::kNormal || info.mnemonic != row.mnemonic) {
      fail(ErrorCode::kBadString, "mapping table: row '" + line + "' disagrees with the opcode table");
    }
    if (t.by_opcode[row.opcode] >= 0) fail(ErrorCode::kBadString, "mapping table: duplicate row '" + line + "'");
    t.by_opcode[row.opcode] = static_cast<int>(t.rows.size());
    t.rows.push_back(std::move(row));
  }
  for (int v = 0; v < 256; ++v) {
    if (isa::opcode_info(static_cast<uint8_t>(v)).kind == isa::OpKind::kNormal && t.by_opcode[v] < 0) {
      fail(ErrorCode::kBadString, "mapping table: no row for opcode " + std::to_string(v));
    }
  }
  return t;
}

const Table& table() {
  static const Table t = load();
  return t;
}

}  // namespace

const std::vector<MappingRow>& mapping_table() { return table().rows; }

const MappingRow& mapping_for(uint8_t opcode) {
  const auto& info = isa::opcode_info(opcode);
  if (info.kind == isa::OpKind::kOdex) {
    Error e(ErrorCode::kUnsupportedOpcode, "optimized opcode " + std::string(info.mnemonic) + " is not lifted");
    e.opcode = opcode;
    throw e;
  }
  const int idx = table().by_opcode[opcode];
  if (info.kind == isa::OpKind::kUnused || idx < 0) {
    Error e(ErrorCode::kUnknownOpcode, "unused opcode");
    e.opcode = opcode;
    throw e;
  }
  return table().rows[static_cast<size_t>(idx)];
}

}  // namespace dexlift::lift
