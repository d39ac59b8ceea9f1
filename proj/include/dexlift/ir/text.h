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

// Line-oriented IR listing:
//
//   method V LSnake;.addRandomApple() {
//     local v0: LCoordinate;
//     L0: v0 = null
//     L1: if v0 == null goto L4
//     catch Ljava/lang/Exception; from L1 to L2 with L5
//   }
//
// Every statement carries a label L<index>. Trap ranges are inclusive.
// Float and double constants print their decimal value followed by the
// exact bit pattern, e.g. 1.0F(0x3f800000).

#pragma once

#include <string>
#include <string_view>

#include "dexlift/ir/ir.h"

namespace dexlift::ir {

std::string emit_text(const Body& body);

// Rendering of single pieces, used by diagnostics and the DOT exporters.
std::string immediate_text(const Body& body, const Immediate& imm);
std::string value_text(const Body& body, const Value& value);
std::string statement_text(const Body& body, const Statement& s,
                           const std::unordered_map<const Statement*, size_t>& index);

std::string_view binop_symbol(BinOp op);
std::string_view relop_symbol(RelOp op);
std::string_view cmp_kind_name(CmpKind kind);
std::string_view invoke_keyword(InvokeKind kind);

// Parses emit_text output. Details the listing does not show (operand types
// of arithmetic, array access variants, cast sources, provisional flags,
// Dalvik addresses) come back as defaults, so the guarantee is
// emit_text(parse_text(t)) == t. Throws Error(kBadString) on malformed text.
Body parse_text(std::string_view text);

}  // namespace dexlift::ir
