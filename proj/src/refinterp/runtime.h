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

// Pieces shared by the two interpreters: Java arithmetic, storage
// normalization and stub dispatch.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dexlift/refinterp/refinterp.h"

namespace dexlift::refinterp::detail {

inline constexpr char kArithmetic[] = "Ljava/lang/ArithmeticException;";
inline constexpr char kNullPointer[] = "Ljava/lang/NullPointerException;";
inline constexpr char kIndexOutOfBounds[] = "Ljava/lang/ArrayIndexOutOfBoundsException;";
inline constexpr char kNegativeSize[] = "Ljava/lang/NegativeArraySizeException;";
inline constexpr char kClassCast[] = "Ljava/lang/ClassCastException;";

// A Java exception in flight.
struct JavaThrow {
  std::string type;
  uint32_t handle = 0;  // the thrown object; 0 allocates a fresh one
};

enum class Arith { kAdd, kSub, kMul, kDiv, kRem, kAnd, kOr, kXor, kShl, kShr, kUshr };

// Java semantics for kind 'I', 'J', 'F' or 'D'. Shift counts are ints.
// Integer division by zero throws JavaThrow{kArithmetic}.
RtValue arith(Arith op, char kind, RtValue a, RtValue b);
RtValue negate(char kind, RtValue a);
// Primitive conversion between descriptors I J F D B C S.
RtValue convert(char from, char to, RtValue a);
// cmpl/cmpg (gt_bias picks the NaN result) and cmp-long.
int32_t compare(char kind, bool gt_bias, RtValue a, RtValue b);

// Bits as stored in a field or array slot of the given type: narrow
// integers are truncated and re-extended.
uint64_t store_bits(std::string_view descriptor, const RtValue& v);
RtValue load_value(std::string_view descriptor, uint64_t bits);

// Throwable object for a runtime exception.
uint32_t make_exception(Heap& heap, const std::string& type);

// Calls a stub, recording it in trace. Throws JavaThrow for exceptions the
// stub raises and Error(kUnsupportedForOracle) for unknown methods.
std::optional<RtValue> call_stub(const Env& env, Heap& heap, const dex::MethodRef& method,
                                 const std::vector<RtValue>& args, std::vector<std::string>& trace);

// Instance-of test for a possibly null reference.
bool instance_of(const Env& env, const Heap& heap, const RtValue& ref, const std::string& type);

// Shared budget check.
void charge(uint64_t& steps, const Env& env);

}  // namespace dexlift::refinterp::detail
