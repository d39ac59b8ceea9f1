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

#include "dexlift/isa/opcodes.h"

#include <array>
#include <string>
#include <unordered_map>

namespace dexlift::isa {
namespace {

using F = Format;
using G = Group;
using K = OpKind;
using P = PoolKind;

// One row per opcode value. Odex rows are the optimized instructions the
// runtime writes into installed code; they never occur in distributed apps.
constexpr std::array<Opcode, 256> kOpcodes = {{
    {0x00, "nop", F::k10x, G::kOther, K::kNormal, P::kNone},
    {0x01, "move", F::k12x, G::kMove, K::kNormal, P::kNone},
    {0x02, "move/from16", F::k22x, G::kMove, K::kNormal, P::kNone},
    {0x03, "move/16", F::k32x, G::kMove, K::kNormal, P::kNone},
    {0x04, "move-wide", F::k12x, G::kMove, K::kNormal, P::kNone},
    {0x05, "move-wide/from16", F::k22x, G::kMove, K::kNormal, P::kNone},
    {0x06, "move-wide/16", F::k32x, G::kMove, K::kNormal, P::kNone},
    {0x07, "move-object", F::k12x, G::kMove, K::kNormal, P::kNone},
    {0x08, "move-object/from16", F::k22x, G::kMove, K::kNormal, P::kNone},
    {0x09, "move-object/16", F::k32x, G::kMove, K::kNormal, P::kNone},
    {0x0a, "move-result", F::k11x, G::kMove, K::kNormal, P::kNone},
    {0x0b, "move-result-wide", F::k11x, G::kMove, K::kNormal, P::kNone},
    {0x0c, "move-result-object", F::k11x, G::kMove, K::kNormal, P::kNone},
    {0x0d, "move-exception", F::k11x, G::kMove, K::kNormal, P::kNone},
    {0x0e, "return-void", F::k10x, G::kMove, K::kNormal, P::kNone},
    {0x0f, "return", F::k11x, G::kMove, K::kNormal, P::kNone},
    {0x10, "return-wide", F::k11x, G::kMove, K::kNormal, P::kNone},
    {0x11, "return-object", F::k11x, G::kMove, K::kNormal, P::kNone},
    {0x12, "const/4", F::k11n, G::kMove, K::kNormal, P::kNone},
    {0x13, "const/16", F::k21s, G::kMove, K::kNormal, P::kNone},
    {0x14, "const", F::k31i, G::kMove, K::kNormal, P::kNone},
    {0x15, "const/high16", F::k21h, G::kMove, K::kNormal, P::kNone},
    {0x16, "const-wide/16", F::k21s, G::kMove, K::kNormal, P::kNone},
    {0x17, "const-wide/32", F::k31i, G::kMove, K::kNormal, P::kNone},
    {0x18, "const-wide", F::k51l, G::kMove, K::kNormal, P::kNone},
    {0x19, "const-wide/high16", F::k21h, G::kMove, K::kNormal, P::kNone},
    {0x1a, "const-string", F::k21c, G::kMove, K::kNormal, P::kString},
    {0x1b, "const-string/jumbo", F::k31c, G::kMove, K::kNormal, P::kString},
    {0x1c, "const-class", F::k21c, G::kMove, K::kNormal, P::kType},
    {0x1d, "monitor-enter", F::k11x, G::kOther, K::kNormal, P::kNone},
    {0x1e, "monitor-exit", F::k11x, G::kOther, K::kNormal, P::kNone},
    {0x1f, "check-cast", F::k21c, G::kOther, K::kNormal, P::kType},
    {0x20, "instance-of", F::k22c, G::kOther, K::kNormal, P::kType},
    {0x21, "array-length", F::k12x, G::kOther, K::kNormal, P::kNone},
    {0x22, "new-instance", F::k21c, G::kOther, K::kNormal, P::kType},
    {0x23, "new-array", F::k22c, G::kOther, K::kNormal, P::kType},
    {0x24, "filled-new-array", F::k35c, G::kOther, K::kNormal, P::kType},
    {0x25, "filled-new-array/range", F::k3rc, G::kOther, K::kNormal, P::kType},
    {0x26, "fill-array-data", F::k31t, G::kOther, K::kNormal, P::kNone},
    {0x27, "throw", F::k11x, G::kBranch, K::kNormal, P::kNone},
    {0x28, "goto", F::k10t, G::kBranch, K::kNormal, P::kNone},
    {0x29, "goto/16", F::k20t, G::kBranch, K::kNormal, P::kNone},
    {0x2a, "goto/32", F::k30t, G::kBranch, K::kNormal, P::kNone},
    {0x2b, "packed-switch", F::k31t, G::kBranch, K::kNormal, P::kNone},
    {0x2c, "sparse-switch", F::k31t, G::kBranch, K::kNormal, P::kNone},
    {0x2d, "cmpl-float", F::k23x, G::kBranch, K::kNormal, P::kNone},
    {0x2e, "cmpg-float", F::k23x, G::kBranch, K::kNormal, P::kNone},
    {0x2f, "cmpl-double", F::k23x, G::kBranch, K::kNormal, P::kNone},
    {0x30, "cmpg-double", F::k23x, G::kBranch, K::kNormal, P::kNone},
    {0x31, "cmp-long", F::k23x, G::kBranch, K::kNormal, P::kNone},
    {0x32, "if-eq", F::k22t, G::kBranch, K::kNormal, P::kNone},
    {0x33, "if-ne", F::k22t, G::kBranch, K::kNormal, P::kNone},
    {0x34, "if-lt", F::k22t, G::kBranch, K::kNormal, P::kNone},
    {0x35, "if-ge", F::k22t, G::kBranch, K::kNormal, P::kNone},
    {0x36, "if-gt", F::k22t, G::kBranch, K::kNormal, P::kNone},
    {0x37, "if-le", F::k22t, G::kBranch, K::kNormal, P::kNone},
    {0x38, "if-eqz", F::k21t, G::kBranch, K::kNormal, P::kNone},
    {0x39, "if-nez", F::k21t, G::kBranch, K::kNormal, P::kNone},
    {0x3a, "if-ltz", F::k21t, G::kBranch, K::kNormal, P::kNone},
    {0x3b, "if-gez", F::k21t, G::kBranch, K::kNormal, P::kNone},
    {0x3c, "if-gtz", F::k21t, G::kBranch, K::kNormal, P::kNone},
    {0x3d, "if-lez", F::k21t, G::kBranch, K::kNormal, P::kNone},
    {0x3e, "unused-3e", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x3f, "unused-3f", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x40, "unused-40", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x41, "unused-41", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x42, "unused-42", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x43, "unused-43", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x44, "aget", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x45, "aget-wide", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x46, "aget-object", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x47, "aget-boolean", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x48, "aget-byte", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x49, "aget-char", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x4a, "aget-short", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x4b, "aput", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x4c, "aput-wide", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x4d, "aput-object", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x4e, "aput-boolean", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x4f, "aput-byte", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x50, "aput-char", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x51, "aput-short", F::k23x, G::kFieldAccess, K::kNormal, P::kNone},
    {0x52, "iget", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x53, "iget-wide", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x54, "iget-object", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x55, "iget-boolean", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x56, "iget-byte", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x57, "iget-char", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x58, "iget-short", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x59, "iput", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x5a, "iput-wide", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x5b, "iput-object", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x5c, "iput-boolean", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x5d, "iput-byte", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x5e, "iput-char", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x5f, "iput-short", F::k22c, G::kFieldAccess, K::kNormal, P::kField},
    {0x60, "sget", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x61, "sget-wide", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x62, "sget-object", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x63, "sget-boolean", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x64, "sget-byte", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x65, "sget-char", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x66, "sget-short", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x67, "sput", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x68, "sput-wide", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x69, "sput-object", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x6a, "sput-boolean", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x6b, "sput-byte", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x6c, "sput-char", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x6d, "sput-short", F::k21c, G::kFieldAccess, K::kNormal, P::kField},
    {0x6e, "invoke-virtual", F::k35c, G::kInvoke, K::kNormal, P::kMethod},
    {0x6f, "invoke-super", F::k35c, G::kInvoke, K::kNormal, P::kMethod},
    {0x70, "invoke-direct", F::k35c, G::kInvoke, K::kNormal, P::kMethod},
    {0x71, "invoke-static", F::k35c, G::kInvoke, K::kNormal, P::kMethod},
    {0x72, "invoke-interface", F::k35c, G::kInvoke, K::kNormal, P::kMethod},
    {0x73, "unused-73", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x74, "invoke-virtual/range", F::k3rc, G::kInvoke, K::kNormal, P::kMethod},
    {0x75, "invoke-super/range", F::k3rc, G::kInvoke, K::kNormal, P::kMethod},
    {0x76, "invoke-direct/range", F::k3rc, G::kInvoke, K::kNormal, P::kMethod},
    {0x77, "invoke-static/range", F::k3rc, G::kInvoke, K::kNormal, P::kMethod},
    {0x78, "invoke-interface/range", F::k3rc, G::kInvoke, K::kNormal, P::kMethod},
    {0x79, "unused-79", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x7a, "unused-7a", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0x7b, "neg-int", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x7c, "not-int", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x7d, "neg-long", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x7e, "not-long", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x7f, "neg-float", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x80, "neg-double", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x81, "int-to-long", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x82, "int-to-float", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x83, "int-to-double", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x84, "long-to-int", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x85, "long-to-float", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x86, "long-to-double", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x87, "float-to-int", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x88, "float-to-long", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x89, "float-to-double", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x8a, "double-to-int", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x8b, "double-to-long", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x8c, "double-to-float", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x8d, "int-to-byte", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x8e, "int-to-char", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x8f, "int-to-short", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0x90, "add-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x91, "sub-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x92, "mul-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x93, "div-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x94, "rem-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x95, "and-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x96, "or-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x97, "xor-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x98, "shl-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x99, "shr-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x9a, "ushr-int", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x9b, "add-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x9c, "sub-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x9d, "mul-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x9e, "div-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0x9f, "rem-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa0, "and-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa1, "or-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa2, "xor-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa3, "shl-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa4, "shr-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa5, "ushr-long", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa6, "add-float", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa7, "sub-float", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa8, "mul-float", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xa9, "div-float", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xaa, "rem-float", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xab, "add-double", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xac, "sub-double", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xad, "mul-double", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xae, "div-double", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xaf, "rem-double", F::k23x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb0, "add-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb1, "sub-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb2, "mul-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb3, "div-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb4, "rem-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb5, "and-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb6, "or-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb7, "xor-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb8, "shl-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xb9, "shr-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xba, "ushr-int/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xbb, "add-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xbc, "sub-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xbd, "mul-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xbe, "div-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xbf, "rem-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc0, "and-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc1, "or-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc2, "xor-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc3, "shl-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc4, "shr-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc5, "ushr-long/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc6, "add-float/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc7, "sub-float/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc8, "mul-float/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xc9, "div-float/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xca, "rem-float/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xcb, "add-double/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xcc, "sub-double/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xcd, "mul-double/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xce, "div-double/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xcf, "rem-double/2addr", F::k12x, G::kArithLogic, K::kNormal, P::kNone},
    {0xd0, "add-int/lit16", F::k22s, G::kArithLogic, K::kNormal, P::kNone},
    {0xd1, "rsub-int", F::k22s, G::kArithLogic, K::kNormal, P::kNone},
    {0xd2, "mul-int/lit16", F::k22s, G::kArithLogic, K::kNormal, P::kNone},
    {0xd3, "div-int/lit16", F::k22s, G::kArithLogic, K::kNormal, P::kNone},
    {0xd4, "rem-int/lit16", F::k22s, G::kArithLogic, K::kNormal, P::kNone},
    {0xd5, "and-int/lit16", F::k22s, G::kArithLogic, K::kNormal, P::kNone},
    {0xd6, "or-int/lit16", F::k22s, G::kArithLogic, K::kNormal, P::kNone},
    {0xd7, "xor-int/lit16", F::k22s, G::kArithLogic, K::kNormal, P::kNone},
    {0xd8, "add-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xd9, "rsub-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xda, "mul-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xdb, "div-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xdc, "rem-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xdd, "and-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xde, "or-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xdf, "xor-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xe0, "shl-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xe1, "shr-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xe2, "ushr-int/lit8", F::k22b, G::kArithLogic, K::kNormal, P::kNone},
    {0xe3, "unused-e3", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xe4, "unused-e4", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xe5, "unused-e5", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xe6, "unused-e6", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xe7, "unused-e7", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xe8, "unused-e8", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xe9, "unused-e9", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xea, "unused-ea", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xeb, "unused-eb", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xec, "unused-ec", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xed, "unused-ed", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xee, "execute-inline", F::k35c, G::kInvoke, K::kOdex, P::kNone},
    {0xef, "unused-ef", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xf0, "invoke-direct-empty", F::k35c, G::kInvoke, K::kOdex, P::kNone},
    {0xf1, "unused-f1", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xf2, "iget-quick", F::k22c, G::kFieldAccess, K::kOdex, P::kNone},
    {0xf3, "iget-wide-quick", F::k22c, G::kFieldAccess, K::kOdex, P::kNone},
    {0xf4, "iget-object-quick", F::k22c, G::kFieldAccess, K::kOdex, P::kNone},
    {0xf5, "iput-quick", F::k22c, G::kFieldAccess, K::kOdex, P::kNone},
    {0xf6, "iput-wide-quick", F::k22c, G::kFieldAccess, K::kOdex, P::kNone},
    {0xf7, "iput-object-quick", F::k22c, G::kFieldAccess, K::kOdex, P::kNone},
    {0xf8, "invoke-virtual-quick", F::k35c, G::kInvoke, K::kOdex, P::kNone},
    {0xf9, "invoke-virtual-quick/range", F::k3rc, G::kInvoke, K::kOdex, P::kNone},
    {0xfa, "invoke-super-quick", F::k35c, G::kInvoke, K::kOdex, P::kNone},
    {0xfb, "invoke-super-quick/range", F::k3rc, G::kInvoke, K::kOdex, P::kNone},
    {0xfc, "unused-fc", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xfd, "unused-fd", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xfe, "unused-fe", F::k10x, G::kOther, K::kUnused, P::kNone},
    {0xff, "unused-ff", F::k10x, G::kOther, K::kUnused, P::kNone},
}};

static_assert(kOpcodes[0x12].format == Format::k11n);
static_assert(kOpcodes[0xe2].value == 0xe2);

}  // namespace

const Opcode& opcode_info(uint8_t value) { return kOpcodes[value]; }

std::optional<uint8_t> opcode_by_mnemonic(std::string_view mnemonic) {
  static const auto* index = [] {
    auto* map = new std::unordered_map<std::string, uint8_t>();
    for (const Opcode& op : kOpcodes) {
      if (op.kind != OpKind::kUnused) map->emplace(op.mnemonic, op.value);
    }
    return map;
  }();
  auto it = index->find(std::string(mnemonic));
  if (it == index->end()) return std::nullopt;
  return it->second;
}

int format_width(Format format) {
  switch (format) {
    case F::k10x:
    case F::k12x:
    case F::k11n:
    case F::k11x:
    case F::k10t:
      return 1;
    case F::k20t:
    case F::k22x:
    case F::k21t:
    case F::k21s:
    case F::k21h:
    case F::k21c:
    case F::k23x:
    case F::k22b:
    case F::k22t:
    case F::k22s:
    case F::k22c:
      return 2;
    case F::k30t:
    case F::k32x:
    case F::k31i:
    case F::k31t:
    case F::k31c:
    case F::k35c:
    case F::k3rc:
      return 3;
    case F::k51l:
      return 5;
  }
  return 1;
}

std::string_view format_name(Format format) {
  static constexpr std::array<std::string_view, kFormatCount> kNames = {
      "10x", "12x", "11n", "11x", "10t", "20t", "22x", "21t",
      "21s", "21h", "21c", "23x", "22b", "22t", "22s", "22c",
      "30t", "32x", "31i", "31t", "31c", "35c", "3rc", "51l"};
  return kNames[static_cast<size_t>(format)];
}

std::string_view group_name(Group group) {
  switch (group) {
    case G::kMove: return "move";
    case G::kBranch: return "branch";
    case G::kFieldAccess: return "field_access";
    case G::kInvoke: return "invoke";
    case G::kArithLogic: return "arith_logic";
    case G::kOther: return "other";
  }
  return "other";
}

FormatShape format_shape(Format format) {
  //                 regs  bits  2nd   lit    branch pool
  switch (format) {
    case F::k10x: return {0, 0, 0, false, false, false};
    case F::k12x: return {2, 4, 4, false, false, false};
    case F::k11n: return {1, 4, 0, true, false, false};
    case F::k11x: return {1, 8, 0, false, false, false};
    case F::k10t: return {0, 0, 0, false, true, false};
    case F::k20t: return {0, 0, 0, false, true, false};
    case F::k22x: return {2, 8, 16, false, false, false};
    case F::k21t: return {1, 8, 0, false, true, false};
    case F::k21s: return {1, 8, 0, true, false, false};
    case F::k21h: return {1, 8, 0, true, false, false};
    case F::k21c: return {1, 8, 0, false, false, true};
    case F::k23x: return {3, 8, 8, false, false, false};
    case F::k22b: return {2, 8, 8, true, false, false};
    case F::k22t: return {2, 4, 4, false, true, false};
    case F::k22s: return {2, 4, 4, true, false, false};
    case F::k22c: return {2, 4, 4, false, false, true};
    case F::k30t: return {0, 0, 0, false, true, false};
    case F::k32x: return {2, 16, 16, false, false, false};
    case F::k31i: return {1, 8, 0, true, false, false};
    case F::k31t: return {1, 8, 0, false, true, false};
    case F::k31c: return {1, 8, 0, false, false, true};
    case F::k35c: return {-1, 4, 4, false, false, true};
    case F::k3rc: return {-1, 16, 16, false, false, true};
    case F::k51l: return {1, 8, 0, true, false, false};
  }
  return {};
}

}  // namespace dexlift::isa
