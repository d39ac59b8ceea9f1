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

// Stack-less three-address IR. Operands of compound values are immediates
// (locals or constants); branch targets point directly at statements owned
// by the same Body.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dexlift/dex/dex_file.h"
#include "dexlift/ir/types.h"

namespace dexlift::ir {

using LocalId = uint32_t;

struct Local {
  std::string name;
  IrType type;
};

// ---- Immediates ----

struct LocalRef {
  LocalId id = 0;
  bool operator==(const LocalRef&) const = default;
};
struct IntConstant {
  int32_t value = 0;
  bool operator==(const IntConstant&) const = default;
};
struct LongConstant {
  int64_t value = 0;
  bool operator==(const LongConstant&) const = default;
};
struct FloatConstant {
  uint32_t bits = 0;
  bool operator==(const FloatConstant&) const = default;
};
struct DoubleConstant {
  uint64_t bits = 0;
  bool operator==(const DoubleConstant&) const = default;
};
struct NullConstant {
  bool operator==(const NullConstant&) const = default;
};
struct StringConstant {
  std::string value;
  bool operator==(const StringConstant&) const = default;
};
struct ClassConstant {
  std::string descriptor;
  bool operator==(const ClassConstant&) const = default;
};

using Immediate = std::variant<LocalRef, IntConstant, LongConstant, FloatConstant, DoubleConstant, NullConstant,
                               StringConstant, ClassConstant>;

// ---- Compound values ----

// Static when base is absent.
struct FieldAccess {
  std::optional<LocalId> base;
  dex::FieldRef field;
  bool operator==(const FieldAccess&) const = default;
};

// Which aget/aput variant produced the access. kWord and kWide leave the
// element type open (int or float, long or double).
enum class ArrayKind { kWord, kWide, kObject, kBoolean, kByte, kChar, kShort };

struct ArrayAccess {
  LocalId base = 0;
  Immediate index;
  ArrayKind kind = ArrayKind::kWord;
  bool operator==(const ArrayAccess&) const = default;
};

enum class BinOp { kAdd, kSub, kMul, kDiv, kRem, kAnd, kOr, kXor, kShl, kShr, kUshr };

struct BinaryOp {
  BinOp op = BinOp::kAdd;
  Immediate lhs;
  Immediate rhs;
  IrType type;  // operand type named by the opcode: int, long, float or double
  bool operator==(const BinaryOp&) const = default;
};

struct UnaryOp {  // negation
  Immediate operand;
  IrType type;
  bool operator==(const UnaryOp&) const = default;
};

// Primitive conversion (from is the source type) or reference cast (from
// is Unknown).
struct Cast {
  IrType from;
  IrType to;
  Immediate operand;
  bool operator==(const Cast&) const = default;
};

struct InstanceOf {
  IrType type;
  Immediate operand;
  bool operator==(const InstanceOf&) const = default;
};

struct New {
  std::string descriptor;
  bool operator==(const New&) const = default;
};

struct NewArray {
  IrType type;  // the array type, e.g. [I
  Immediate size;
  bool operator==(const NewArray&) const = default;
};

struct Lengthof {
  Immediate operand;
  bool operator==(const Lengthof&) const = default;
};

enum class CmpKind { kCmplFloat, kCmpgFloat, kCmplDouble, kCmpgDouble, kCmpLong };

// -1/0/1 three-way comparison; the kind records operand type and NaN bias.
struct Compare {
  CmpKind kind = CmpKind::kCmpLong;
  Immediate lhs;
  Immediate rhs;
  bool operator==(const Compare&) const = default;
};

using Value = std::variant<Immediate, FieldAccess, ArrayAccess, BinaryOp, UnaryOp, Cast, InstanceOf, New, NewArray,
                           Lengthof, Compare>;

// Left-hand side of an assignment.
using LValue = std::variant<LocalRef, FieldAccess, ArrayAccess>;

// ---- Statements ----

struct Statement;

struct NopStmt {};

enum class IdentityKind { kThis, kParameter, kCaughtException };

struct IdentityStmt {
  LocalId target = 0;
  IdentityKind source = IdentityKind::kThis;
  uint32_t parameter = 0;  // kParameter only
};

struct AssignStmt {
  LValue target;
  Value value;
  // The constant's type is still to be decided (const-family loads and
  // array-data element stores).
  bool provisional = false;
};

enum class RelOp { kEq, kNe, kLt, kGe, kGt, kLe };

struct IfStmt {
  RelOp op = RelOp::kEq;
  Immediate lhs;
  Immediate rhs;
  Statement* target = nullptr;
};

struct GotoStmt {
  Statement* target = nullptr;
};

struct TableSwitchStmt {
  Immediate key;
  int32_t first_key = 0;
  std::vector<Statement*> targets;
  Statement* default_target = nullptr;
};

struct LookupSwitchStmt {
  Immediate key;
  std::vector<int32_t> keys;
  std::vector<Statement*> targets;
  Statement* default_target = nullptr;
};

enum class InvokeKind { kVirtual, kSuper, kDirect, kStatic, kInterface };

struct InvokeStmt {
  InvokeKind kind = InvokeKind::kStatic;
  dex::MethodRef method;
  std::vector<Immediate> args;  // receiver first for non-static calls
  std::optional<LocalId> result;
};

struct ReturnStmt {
  Immediate value;
};
struct ReturnVoidStmt {};
struct ThrowStmt {
  Immediate value;
};
struct MonitorEnterStmt {
  Immediate value;
};
struct MonitorExitStmt {
  Immediate value;
};
struct BreakpointStmt {};

// Alternative order matches StmtKind.
using StmtNode = std::variant<NopStmt, IdentityStmt, AssignStmt, IfStmt, GotoStmt, TableSwitchStmt,
                              LookupSwitchStmt, InvokeStmt, ReturnStmt, ReturnVoidStmt, ThrowStmt, MonitorEnterStmt,
                              MonitorExitStmt, BreakpointStmt>;

enum class StmtKind {
  kNop,
  kIdentity,
  kAssign,
  kIf,
  kGoto,
  kTableSwitch,
  kLookupSwitch,
  kInvoke,
  kReturn,
  kReturnVoid,
  kThrow,
  kMonitorEnter,
  kMonitorExit,
  kBreakpoint,
};

inline constexpr int kStmtKindCount = 14;

struct Statement {
  StmtNode node;
  // Dalvik address the statement was lifted from, if any.
  std::optional<uint32_t> address;

  StmtKind kind() const { return static_cast<StmtKind>(node.index()); }
  template <typename T>
  T* as() {
    return std::get_if<T>(&node);
  }
  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

std::string_view stmt_kind_name(StmtKind kind);

// Protected range [first, last] (inclusive, in statement order).
struct Trap {
  Statement* first = nullptr;
  Statement* last = nullptr;
  Statement* handler = nullptr;
  std::optional<std::string> exception_type;  // absent for catch-all
};

class Body {
 public:
  Body() = default;
  Body(const Body&) = delete;
  Body& operator=(const Body&) = delete;
  Body(Body&&) = default;
  Body& operator=(Body&&) = default;

  dex::MethodRef signature;
  bool is_static = true;
  std::vector<Local> locals;
  std::vector<std::unique_ptr<Statement>> statements;
  std::vector<Trap> traps;
  // Dalvik code-unit address -> statement lifted for it.
  std::map<uint32_t, Statement*> addr_map;

  LocalId add_local(std::string name, IrType type = IrType::unknown());
  Statement* append(StmtNode node, std::optional<uint32_t> address = std::nullopt);

  // Position of every statement, for index-based algorithms.
  std::unordered_map<const Statement*, size_t> index_map() const;

  // Deep copy with all statement pointers remapped.
  Body clone() const;
};

// Every statement pointer held by s (branch and switch targets).
std::vector<Statement**> branch_targets(Statement& s);
std::vector<Statement* const*> branch_targets(const Statement& s);

// Locals read by s, in operand order (may repeat).
std::vector<LocalId> uses(const Statement& s);
// Local written by s, if any.
std::optional<LocalId> def(const Statement& s);

// Could the statement raise an exception at run time.
bool can_throw(const Statement& s);

// Whether control may continue to the next statement.
bool falls_through(const Statement& s);

}  // namespace dexlift::ir
